use std::fmt;

use thiserror::Error;

use crate::formula::{Context, Formula, Op};

/// The rewrite rules, named after the operator nesting they remove.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    /// `φ₁ W φ₂[ψ₁ U ψ₂] ≡ (φ₁ U φ₂[ψ₁ U ψ₂]) ∨ G φ₁`
    WU,
    /// `φ₁[ψ₁ U ψ₂] W φ₂ ≡ (GF ψ₂ ∧ φ₁[ψ₁ W ψ₂] W φ₂) ∨ φ₁[ψ₁ U ψ₂] U (φ₂ ∨ G φ₁[false])`
    UW,
    /// `φ[GF ψ] ≡ (GF ψ ∧ φ[true]) ∨ φ[false]`
    GF1,
    /// `φ[FG ψ] ≡ (FG ψ ∧ φ[true]) ∨ φ[false]`
    FG1,
    /// `GF φ[ψ₁ W ψ₂] ≡ GF φ[ψ₁ U ψ₂] ∨ (FG ψ₁ ∧ GF φ[true])`
    GF2,
    /// `FG φ[ψ₁ U ψ₂] ≡ (GF ψ₂ ∧ FG φ[ψ₁ W ψ₂]) ∨ FG φ[false]`
    FG2,
    /// `φ₁[ψ₁ M ψ₂] W φ₂ ≡ (GF ψ₁ ∧ φ₁[ψ₁ R ψ₂] W φ₂) ∨ φ₁[ψ₁ M ψ₂] U (φ₂ ∨ G φ₁[false])`
    MW,
    /// `φ₁ W φ₂[ψ₁ M ψ₂] ≡ φ₁ U φ₂[ψ₁ M ψ₂] ∨ G φ₁`
    WM,
    /// `φ₁[ψ₁ U ψ₂] R φ₂ ≡ φ₁[ψ₁ U ψ₂] M φ₂ ∨ G φ₂`
    UR,
    /// `φ₁[ψ₁ M ψ₂] R φ₂ ≡ φ₁[ψ₁ M ψ₂] M φ₂ ∨ G φ₂`
    MR,
    /// `φ₁ R φ₂[ψ₁ U ψ₂] ≡ (GF ψ₂ ∧ φ₁ R φ₂[ψ₁ W ψ₂]) ∨ (φ₁ ∨ G φ₂[false]) M φ₂[ψ₁ U ψ₂]`
    RU,
    /// `φ₁ R φ₂[ψ₁ M ψ₂] ≡ (GF ψ₁ ∧ φ₁ R φ₂[ψ₁ R ψ₂]) ∨ (φ₁ ∨ G φ₂[false]) M φ₂[ψ₁ M ψ₂]`
    RM,
    /// `GF φ[ψ₁ R ψ₂] ≡ GF φ[ψ₁ M ψ₂] ∨ (FG ψ₂ ∧ GF φ[true])`
    GFR,
    /// `FG φ[ψ₁ M ψ₂] ≡ (GF ψ₁ ∧ FG φ[ψ₁ R ψ₂]) ∨ FG φ[false]`
    FGM,
}

impl RuleId {
    pub const ALL: [RuleId; 14] = [
        RuleId::WU,
        RuleId::UW,
        RuleId::GF1,
        RuleId::FG1,
        RuleId::GF2,
        RuleId::FG2,
        RuleId::MW,
        RuleId::WM,
        RuleId::UR,
        RuleId::MR,
        RuleId::RU,
        RuleId::RM,
        RuleId::GFR,
        RuleId::FGM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::WU => "WU",
            RuleId::UW => "UW",
            RuleId::GF1 => "GF1",
            RuleId::FG1 => "FG1",
            RuleId::GF2 => "GF2",
            RuleId::FG2 => "FG2",
            RuleId::MW => "MW",
            RuleId::WM => "WM",
            RuleId::UR => "UR",
            RuleId::MR => "MR",
            RuleId::RU => "RU",
            RuleId::RM => "RM",
            RuleId::GFR => "GFR",
            RuleId::FGM => "FGM",
        }
    }

    /// Stage in which the normalizer applies the rule.
    pub fn stage(self) -> u8 {
        match self {
            RuleId::GF1 | RuleId::FG1 => 2,
            RuleId::GF2 | RuleId::FG2 | RuleId::GFR | RuleId::FGM => 3,
            _ => 1,
        }
    }

    /// Operator of the subformula the context abstracts: `U`/`M`/`W`/`R`,
    /// or a limit operator for the stage-2 rules.
    pub fn target_op(self) -> Op {
        match self {
            RuleId::WU | RuleId::UW | RuleId::UR | RuleId::RU | RuleId::FG2 => Op::Until,
            RuleId::MW | RuleId::WM | RuleId::MR | RuleId::RM | RuleId::FGM => Op::StrongRelease,
            RuleId::GF2 => Op::WeakUntil,
            RuleId::GFR => Op::Release,
            RuleId::GF1 => Op::LimitGF,
            RuleId::FG1 => Op::LimitFG,
        }
    }

    /// Whether the rule has a second operand `φ₁`/`φ₂` besides the context.
    pub fn has_side(self) -> bool {
        self.stage() == 1
    }

    /// Whether the hole sits in the left operand of the rewritten node.
    pub fn hole_on_left(self) -> bool {
        matches!(self, RuleId::UW | RuleId::MW | RuleId::UR | RuleId::MR)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule {0} needs a side operand")]
    MissingSide(RuleId),
    #[error("rule {0} takes no side operand")]
    UnexpectedSide(RuleId),
}

/// An instantiation of a rule's left-hand side.
///
/// For stage-1 rules `side` is the operand without the hole; for limit
/// rules it is `None`. For `GF1`/`FG1` only `psi1` is used, as the
/// argument of the limit formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleArgs {
    pub context: Context,
    pub side: Option<Formula>,
    pub psi1: Formula,
    pub psi2: Formula,
}

/// The four fillings of a context that right-hand sides are built from.
#[derive(Clone, Debug)]
pub(crate) struct Slots {
    /// The context filled with the matched subformula.
    pub orig: Formula,
    /// Filled with the subformula of swapped strength (`U`↔`W`, `M`↔`R`).
    pub swapped: Formula,
    pub top: Formula,
    pub bottom: Formula,
}

pub(crate) fn swap_strength(op: Op) -> Op {
    match op {
        Op::Until => Op::WeakUntil,
        Op::WeakUntil => Op::Until,
        Op::StrongRelease => Op::Release,
        Op::Release => Op::StrongRelease,
        _ => panic!("{op:?} has no strength dual"),
    }
}

/// Constructors used to assemble right-hand sides, plain or simplifying.
pub(crate) struct Build {
    pub simplify: bool,
}

impl Build {
    fn bin(&self, op: Op, l: Formula, r: Formula) -> Formula {
        if self.simplify {
            super::simplify::binary(op, l, r)
        } else {
            Formula::binary(op, l, r)
        }
    }

    fn un(&self, op: Op, a: Formula) -> Formula {
        if self.simplify {
            super::simplify::unary(op, a)
        } else {
            Formula::unary(op, a)
        }
    }

    fn and(&self, l: Formula, r: Formula) -> Formula {
        self.bin(Op::And, l, r)
    }

    fn or(&self, l: Formula, r: Formula) -> Formula {
        self.bin(Op::Or, l, r)
    }

    /// `G x` inside rules, written `x W false`.
    fn globally(&self, x: Formula) -> Formula {
        self.bin(Op::WeakUntil, x, Formula::False)
    }

    /// Right-hand side of `rule`. `goal` is `ψ₂` for `U`, `ψ₁` for `M`;
    /// `invariant` is `ψ₁` for `W`, `ψ₂` for `R`; for `GF1`/`FG1` the
    /// limit formula is passed as `goal`.
    pub fn rhs(&self, rule: RuleId, side: Option<&Formula>, s: &Slots, goal: &Formula) -> Formula {
        let side = || side.expect("stage-1 rule needs a side").clone();
        match rule {
            RuleId::WU | RuleId::WM => {
                let phi1 = side();
                let left = self.bin(Op::Until, phi1.clone(), s.orig.clone());
                self.or(left, self.globally(phi1))
            }
            RuleId::UW | RuleId::MW => {
                let phi2 = side();
                let weak = self.bin(Op::WeakUntil, s.swapped.clone(), phi2.clone());
                let left = self.and(self.un(Op::LimitGF, goal.clone()), weak);
                let right = self.bin(
                    Op::Until,
                    s.orig.clone(),
                    self.or(phi2, self.globally(s.bottom.clone())),
                );
                self.or(left, right)
            }
            RuleId::UR | RuleId::MR => {
                let phi2 = side();
                let left = self.bin(Op::StrongRelease, s.orig.clone(), phi2.clone());
                self.or(left, self.globally(phi2))
            }
            RuleId::RU | RuleId::RM => {
                let phi1 = side();
                let weak = self.bin(Op::Release, phi1.clone(), s.swapped.clone());
                let left = self.and(self.un(Op::LimitGF, goal.clone()), weak);
                let trigger = self.or(phi1, self.globally(s.bottom.clone()));
                let right = self.bin(Op::StrongRelease, trigger, s.orig.clone());
                self.or(left, right)
            }
            RuleId::GF1 | RuleId::FG1 => {
                let left = self.and(goal.clone(), s.top.clone());
                self.or(left, s.bottom.clone())
            }
            RuleId::GF2 | RuleId::GFR => {
                let left = self.un(Op::LimitGF, s.swapped.clone());
                let right = self.and(
                    self.un(Op::LimitFG, goal.clone()),
                    self.un(Op::LimitGF, s.top.clone()),
                );
                self.or(left, right)
            }
            RuleId::FG2 | RuleId::FGM => {
                let left = self.and(
                    self.un(Op::LimitGF, goal.clone()),
                    self.un(Op::LimitFG, s.swapped.clone()),
                );
                self.or(left, self.un(Op::LimitFG, s.bottom.clone()))
            }
        }
    }
}

/// The formula the rule's context abstracts, e.g. `ψ₁ U ψ₂`.
fn target(rule: RuleId, args: &RuleArgs) -> Formula {
    match rule.target_op() {
        Op::LimitGF => Formula::gf(args.psi1.clone()),
        Op::LimitFG => Formula::fg(args.psi1.clone()),
        op => Formula::binary(op, args.psi1.clone(), args.psi2.clone()),
    }
}

/// `goal`/`invariant` argument of the right-hand side builders.
fn key_part(rule: RuleId, args: &RuleArgs) -> Formula {
    match rule {
        RuleId::GF1 | RuleId::FG1 => target(rule, args),
        RuleId::UW | RuleId::RU | RuleId::FG2 | RuleId::GFR => args.psi2.clone(),
        _ => args.psi1.clone(),
    }
}

fn check_shape(rule: RuleId, args: &RuleArgs) -> Result<(), RuleError> {
    match (rule.has_side(), &args.side) {
        (true, None) => Err(RuleError::MissingSide(rule)),
        (false, Some(_)) => Err(RuleError::UnexpectedSide(rule)),
        _ => Ok(()),
    }
}

/// The left-hand side the arguments describe.
pub fn lhs(rule: RuleId, args: &RuleArgs) -> Result<Formula, RuleError> {
    check_shape(rule, args)?;
    let filled = args.context.fill(&target(rule, args));
    Ok(match rule {
        RuleId::WU | RuleId::WM => Formula::weak_until(args.side.clone().unwrap(), filled),
        RuleId::UW | RuleId::MW => Formula::weak_until(filled, args.side.clone().unwrap()),
        RuleId::UR | RuleId::MR => Formula::release(filled, args.side.clone().unwrap()),
        RuleId::RU | RuleId::RM => Formula::release(args.side.clone().unwrap(), filled),
        RuleId::GF1 | RuleId::FG1 => filled,
        RuleId::GF2 | RuleId::GFR => Formula::gf(filled),
        RuleId::FG2 | RuleId::FGM => Formula::fg(filled),
    })
}

/// The rule's right-hand side, built literally without simplification.
pub fn apply_rule(rule: RuleId, args: &RuleArgs) -> Result<Formula, RuleError> {
    check_shape(rule, args)?;
    let t = target(rule, args);
    let swapped = match rule.target_op() {
        Op::LimitGF | Op::LimitFG => t.clone(),
        op => Formula::binary(swap_strength(op), args.psi1.clone(), args.psi2.clone()),
    };
    let slots = Slots {
        orig: args.context.fill(&t),
        swapped: args.context.fill(&swapped),
        top: args.context.fill(&Formula::True),
        bottom: args.context.fill(&Formula::False),
    };
    Ok(Build { simplify: false }.rhs(rule, args.side.as_ref(), &slots, &key_part(rule, args)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, HOLE};

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn ctx(body: Formula) -> Context {
        Context::new(body).unwrap()
    }

    fn hole() -> Formula {
        Formula::atom(HOLE)
    }

    #[test]
    fn weak_until_over_until() {
        let args = RuleArgs { context: Context::identity(), side: Some(p("a")), psi1: p("b"), psi2: p("c") };
        assert_eq!(lhs(RuleId::WU, &args).unwrap(), p("a W (b U c)"));
        assert_eq!(
            apply_rule(RuleId::WU, &args).unwrap(),
            Formula::or(p("a U (b U c)"), Formula::weak_until(p("a"), Formula::False))
        );
    }

    #[test]
    fn limit_extraction() {
        let args = RuleArgs {
            context: ctx(Formula::until(hole(), p("d"))),
            side: None,
            psi1: p("b"),
            psi2: Formula::True,
        };
        assert_eq!(lhs(RuleId::GF1, &args).unwrap(), p("(G F b) U d"));
        assert_eq!(apply_rule(RuleId::GF1, &args).unwrap(), p("(G F b & true U d) | false U d"));

        let args = RuleArgs { context: ctx(Formula::next(hole())), side: None, psi1: p("a"), psi2: Formula::True };
        assert_eq!(apply_rule(RuleId::FG1, &args).unwrap(), p("(F G a & X true) | X false"));
    }

    #[test]
    fn weak_out_of_infinitely_often() {
        let args = RuleArgs { context: Context::identity(), side: None, psi1: p("a"), psi2: p("b") };
        assert_eq!(lhs(RuleId::GF2, &args).unwrap(), p("G F (a W b)"));
        assert_eq!(apply_rule(RuleId::GF2, &args).unwrap(), p("G F (a U b) | (F G a & G F true)"));
        assert_eq!(lhs(RuleId::FG2, &args).unwrap(), p("F G (a U b)"));
        assert_eq!(
            apply_rule(RuleId::FG2, &args).unwrap(),
            p("(G F b & F G (a W b)) | F G false")
        );
    }

    #[test]
    fn until_out_of_weak_until() {
        let args = RuleArgs { context: Context::identity(), side: Some(p("a2")), psi1: p("a0"), psi2: p("a1") };
        let rhs = apply_rule(RuleId::UW, &args).unwrap();
        let g_false = Formula::weak_until(Formula::False, Formula::False);
        let expected = Formula::or(
            Formula::and(Formula::gf(p("a1")), p("(a0 W a1) W a2")),
            Formula::until(p("a0 U a1"), Formula::or(p("a2"), g_false)),
        );
        assert_eq!(rhs, expected);
    }

    #[test]
    fn shape_errors() {
        let args = RuleArgs { context: Context::identity(), side: None, psi1: p("a"), psi2: p("b") };
        assert_eq!(apply_rule(RuleId::WU, &args), Err(RuleError::MissingSide(RuleId::WU)));
        let args = RuleArgs { side: Some(p("c")), ..args };
        assert_eq!(apply_rule(RuleId::GF2, &args), Err(RuleError::UnexpectedSide(RuleId::GF2)));
    }

    #[test]
    fn catalog_is_complete() {
        assert_eq!(RuleId::ALL.len(), 14);
        let mut names: Vec<&str> = RuleId::ALL.iter().map(|r| r.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 14);
    }
}
