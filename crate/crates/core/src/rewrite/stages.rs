use std::time::Instant;

use crate::formula::{
    abstract_occurrences, limit_obstacles, measures, rank, render, Formula, Op, Scope,
};

use super::rules::{swap_strength, Build, RuleId, Slots};
use super::simplify::{self, rebuild};
use super::trace::{RewriteTrace, TraceStep};
use super::{NormalizeError, NormalizeOptions};

/// State of one normalization run: options, trace and resource budget.
pub(crate) struct Engine<'a> {
    opts: &'a NormalizeOptions,
    pub trace: &'a mut RewriteTrace,
    steps: usize,
    deadline: Option<Instant>,
}

/// Preorder-first node of `f` with `pred(op)`, not looking below limit
/// nodes when `skip_limits`.
fn first_node(f: &Formula, pred: fn(Op) -> bool, skip_limits: bool) -> Option<&Formula> {
    if pred(f.op()) {
        return Some(f);
    }
    if skip_limits && f.op().is_limit() {
        return None;
    }
    f.children().find_map(|(_, c)| first_node(c, pred, skip_limits))
}

/// The leftmost proper limit subformula of `f` containing no other limit.
fn lowest_proper_limit(f: &Formula) -> Option<&Formula> {
    fn has_limit(f: &Formula) -> bool {
        f.any_node(&|n| n.op().is_limit())
    }
    fn go(f: &Formula) -> Option<&Formula> {
        if f.op().is_limit() && !f.children().any(|(_, c)| has_limit(c)) {
            return Some(f);
        }
        f.children().find_map(|(_, c)| go(c))
    }
    f.children().find_map(|(_, c)| go(c))
}

/// Replaces every node with operator `op` whose `key` child equals `key`
/// by `with(node_rebuilt)`; below limits only when `scope` allows.
fn replace_matching(
    f: &Formula,
    op: Op,
    key_left: bool,
    key: &Formula,
    scope: Scope,
    with: &dyn Fn(&Formula, &Formula) -> Formula,
) -> Formula {
    if scope == Scope::NotUnderLimit && f.op().is_limit() {
        return f.clone();
    }
    if f.op() == op {
        let (l, r) = f.binary_args().expect("binary");
        if (if key_left { l } else { r }) == key {
            let l = replace_matching(l, op, key_left, key, scope, with);
            let r = replace_matching(r, op, key_left, key, scope, with);
            return with(&l, &r);
        }
    }
    if f.children().next().is_none() {
        return f.clone();
    }
    f.map_children(|c| replace_matching(c, op, key_left, key, scope, with))
}

impl<'a> Engine<'a> {
    pub fn new(opts: &'a NormalizeOptions, trace: &'a mut RewriteTrace) -> Self {
        let deadline = opts.timeout.map(|t| Instant::now() + t);
        Engine { opts, trace, steps: 0, deadline }
    }

    fn build(&self) -> Build {
        Build { simplify: self.opts.simplify }
    }

    fn tidy(&self, f: Formula) -> Formula {
        if self.opts.simplify {
            simplify::simplify(&f)
        } else {
            f
        }
    }

    pub fn check_deadline(&self) -> Result<(), NormalizeError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(NormalizeError::Timeout),
            _ => Ok(()),
        }
    }

    fn record(&mut self, stage: u8, rule: RuleId, redex: &Formula, result: &Formula) -> Result<(), NormalizeError> {
        self.steps += 1;
        if self.steps > self.opts.max_steps {
            return Err(NormalizeError::StepBudget(self.opts.max_steps));
        }
        self.check_deadline()?;
        self.trace.push(TraceStep { stage, rule, redex: render(redex), result_nodes: result.size() });
        Ok(())
    }

    fn try_rebuild(
        &mut self,
        f: &Formula,
        mut child: impl FnMut(&mut Self, &Formula) -> Result<Formula, NormalizeError>,
    ) -> Result<Formula, NormalizeError> {
        let mut err = None;
        let enabled = self.opts.simplify;
        let out = rebuild(f, enabled, |c| match &err {
            Some(_) => c.clone(),
            None => child(self, c).unwrap_or_else(|e| {
                err = Some(e);
                c.clone()
            }),
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Fillings of `within` around `target` (a binary node), exact or
    /// with broad replacement of every node sharing the key argument.
    fn slots(&self, within: &Formula, target: &Formula, scope: Scope) -> Result<Slots, NormalizeError> {
        let op = target.op();
        let (psi1, psi2) = target.binary_args().expect("binary target");
        let swapped_op = swap_strength(op);
        let (swapped, top, bottom) = if self.opts.broad_replacement {
            let key_left = matches!(op, Op::StrongRelease | Op::WeakUntil);
            let key = if key_left { psi1 } else { psi2 };
            let swap = |l: &Formula, r: &Formula| Formula::binary(swapped_op, l.clone(), r.clone());
            (
                replace_matching(within, op, key_left, key, scope, &swap),
                replace_matching(within, op, key_left, key, scope, &|_, _| Formula::True),
                replace_matching(within, op, key_left, key, scope, &|_, _| Formula::False),
            )
        } else {
            let ctx = abstract_occurrences(within, target, scope)
                .map_err(|e| NormalizeError::Invariant(e.to_string()))?;
            let swapped = Formula::binary(swapped_op, psi1.clone(), psi2.clone());
            (ctx.fill(&swapped), ctx.fill(&Formula::True), ctx.fill(&Formula::False))
        };
        Ok(Slots {
            orig: within.clone(),
            swapped: self.tidy(swapped),
            top: self.tidy(top),
            bottom: self.tidy(bottom),
        })
    }

    // ---- stage 1 -------------------------------------------------------

    pub fn stage1(&mut self, f: &Formula) -> Result<Formula, NormalizeError> {
        self.s1(f, None)
    }

    fn s1(&mut self, f: &Formula, bound: Option<usize>) -> Result<Formula, NormalizeError> {
        match f.op() {
            op if op.is_leaf() || op.is_limit() => Ok(f.clone()),
            op if op.is_weak_like() => self.s1_weak(f, bound),
            _ => self.try_rebuild(f, |e, c| e.s1(c, bound)),
        }
    }

    fn s1_weak(&mut self, f: &Formula, bound: Option<usize>) -> Result<Formula, NormalizeError> {
        if measures(f).ubw == 0 {
            return Ok(f.clone());
        }
        let r = rank(f);
        if let Some(b) = bound {
            if r >= b {
                return Err(NormalizeError::Invariant(format!(
                    "stage 1 rank did not decrease ({r} >= {b})"
                )));
            }
        }
        let (l, rr) = f.binary_args().expect("binary");
        let strong = |x: &Formula| first_node(x, Op::is_until_like, true).cloned();
        let is_w = f.op() == Op::WeakUntil;
        // The case without abstraction first: U/M in φ₂ of W, in φ₁ of R.
        let direct = if is_w { strong(rr) } else { strong(l) };
        let (rule, side, hole_side, target) = match direct {
            Some(t) => {
                let rule = match (is_w, t.op()) {
                    (true, Op::Until) => RuleId::WU,
                    (true, _) => RuleId::WM,
                    (false, Op::Until) => RuleId::UR,
                    (false, _) => RuleId::MR,
                };
                if is_w {
                    (rule, l, rr, t)
                } else {
                    (rule, rr, l, t)
                }
            }
            None => {
                let within = if is_w { l } else { rr };
                let t = strong(within).ok_or_else(|| {
                    NormalizeError::Invariant("positive ubw without a strong node".into())
                })?;
                let rule = match (is_w, t.op()) {
                    (true, Op::Until) => RuleId::UW,
                    (true, _) => RuleId::MW,
                    (false, Op::Until) => RuleId::RU,
                    (false, _) => RuleId::RM,
                };
                if is_w {
                    (rule, rr, l, t)
                } else {
                    (rule, l, rr, t)
                }
            }
        };
        let (psi1, psi2) = target.binary_args().expect("binary");
        let goal = if target.op() == Op::Until { psi2.clone() } else { psi1.clone() };
        let slots = match rule {
            RuleId::WU | RuleId::WM | RuleId::UR | RuleId::MR => Slots {
                orig: hole_side.clone(),
                swapped: hole_side.clone(),
                top: hole_side.clone(),
                bottom: hole_side.clone(),
            },
            _ => self.slots(hole_side, &target, Scope::NotUnderLimit)?,
        };
        let rhs = self.build().rhs(rule, Some(side), &slots, &goal);
        self.record(1, rule, f, &rhs)?;
        self.s1(&rhs, Some(r))
    }

    // ---- stage 2 -------------------------------------------------------

    pub fn stage2(&mut self, f: &Formula) -> Result<Formula, NormalizeError> {
        match f.op() {
            Op::And | Op::Or => self.try_rebuild(f, |e, c| e.stage2(c)),
            op if op.is_leaf() => Ok(f.clone()),
            _ => self.s2_temporal(f),
        }
    }

    /// Pulls every proper limit subformula out of the temporal formula
    /// `tau`, lowest first.
    fn s2_temporal(&mut self, tau: &Formula) -> Result<Formula, NormalizeError> {
        let Some(limit) = lowest_proper_limit(tau).cloned() else {
            return Ok(tau.clone());
        };
        let ctx = abstract_occurrences(tau, &limit, Scope::All)
            .map_err(|e| NormalizeError::Invariant(e.to_string()))?;
        let slots = Slots {
            orig: tau.clone(),
            swapped: tau.clone(),
            top: self.tidy(ctx.fill(&Formula::True)),
            bottom: self.tidy(ctx.fill(&Formula::False)),
        };
        let rule = if limit.op() == Op::LimitGF { RuleId::GF1 } else { RuleId::FG1 };
        let rhs = self.build().rhs(rule, None, &slots, &limit);
        self.record(2, rule, tau, &rhs)?;
        self.stage2(&rhs)
    }

    // ---- stage 3 -------------------------------------------------------

    pub fn stage3(&mut self, f: &Formula) -> Result<Formula, NormalizeError> {
        self.s3(f, None)
    }

    fn s3(&mut self, f: &Formula, bound: Option<usize>) -> Result<Formula, NormalizeError> {
        match f.op() {
            Op::And | Op::Or => self.try_rebuild(f, |e, c| e.s3(c, bound)),
            op if op.is_limit() => {
                let out = self.s3_limit(f, bound)?;
                if bound.is_none() {
                    check_limit_bound(f, &out)?;
                }
                Ok(out)
            }
            _ => Ok(f.clone()),
        }
    }

    fn s3_limit(&mut self, f: &Formula, bound: Option<usize>) -> Result<Formula, NormalizeError> {
        let obstacles = limit_obstacles(f);
        if obstacles == 0 {
            return Ok(f.clone());
        }
        if let Some(b) = bound {
            if obstacles >= b {
                return Err(NormalizeError::Invariant(format!(
                    "stage 3 obstacles did not decrease ({obstacles} >= {b})"
                )));
            }
        }
        let psi = f.unary_arg().expect("limit");
        let gf = f.op() == Op::LimitGF;
        let pred = if gf { Op::is_weak_like } else { Op::is_until_like };
        let target = first_node(psi, pred, false).cloned().ok_or_else(|| {
            NormalizeError::Invariant("limit obstacles without a matching node".into())
        })?;
        let (psi1, psi2) = target.binary_args().expect("binary");
        let (rule, key) = match target.op() {
            Op::WeakUntil => (RuleId::GF2, psi1),
            Op::Release => (RuleId::GFR, psi2),
            Op::Until => (RuleId::FG2, psi2),
            _ => (RuleId::FGM, psi1),
        };
        let slots = self.slots(psi, &target, Scope::All)?;
        let rhs = self.build().rhs(rule, None, &slots, &key.clone());
        self.record(3, rule, f, &rhs)?;
        self.s3(&rhs, Some(obstacles))
    }
}

/// `#(out) ≤ 3^{#ψ}·#ψ` for a limit formula with argument `ψ`.
fn check_limit_bound(limit: &Formula, out: &Formula) -> Result<(), NormalizeError> {
    let n = limit.unary_arg().expect("limit").size() as f64;
    let bound = n * 3f64.log2() + n.log2();
    let got = (out.size() as f64).log2();
    if got > bound + 1e-9 {
        return Err(NormalizeError::Invariant(format!(
            "limit formula of argument size {n} grew to {} nodes",
            out.size()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn lowest_limit_is_leftmost_minimal() {
        let f = p("X (G F (a U F G b) & G F c)");
        assert_eq!(lowest_proper_limit(&f), Some(&p("F G b")));
        assert_eq!(lowest_proper_limit(&p("G F a")), None);
        assert_eq!(lowest_proper_limit(&p("G F (a & F G b)")), Some(&p("F G b")));
    }

    #[test]
    fn broad_replacement_matches_key_argument() {
        let f = p("(a U b) & ((c U b) | (a U c))");
        let out = replace_matching(&f, Op::Until, false, &p("b"), Scope::All, &|_, _| Formula::False);
        assert_eq!(out, p("false & (false | (a U c))"));
    }
}
