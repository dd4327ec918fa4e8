//! Rewriting formulas into the normal form in three stages.
//!
//! Stage 1 removes every `U`/`M` below a `W`/`R`, stage 2 pulls limit
//! formulas out of temporal operators and stage 3 clears the arguments of
//! limit formulas.

mod rules;
mod simplify;
mod stages;
mod trace;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::formula::measures::Interner;
use crate::formula::{is_normal_form, measures, Formula};

pub use rules::{apply_rule, lhs, RuleArgs, RuleError, RuleId};
pub use simplify::{
    and, binary, fg, gf, next, or, release, simplify, strong_release, unary, until, weak_until,
};
pub use trace::{RewriteTrace, TraceStep};

use stages::Engine;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Normalize `¬f` and negate the result.
    pub dual: bool,
    /// Replace every occurrence sharing the key argument, not only the
    /// matched subformula.
    pub broad_replacement: bool,
    pub simplify: bool,
    /// Number of stages to run, 1 to 3.
    pub stage_limit: u8,
    /// Maximum number of rule applications.
    pub max_steps: usize,
    pub timeout: Option<Duration>,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            dual: false,
            broad_replacement: false,
            simplify: true,
            stage_limit: 3,
            max_steps: 100_000,
            timeout: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("rewrite step budget of {0} exhausted")]
    StepBudget(usize),
    #[error("normalization timed out")]
    Timeout,
    #[error("rewrite invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub formula: Formula,
    pub trace: RewriteTrace,
    /// Wall time of each stage; zero for stages not run.
    pub stage_times: [Duration; 3],
    /// Output of each stage that ran, in order.
    pub stage_outputs: Vec<Formula>,
}

fn invariant(msg: String) -> NormalizeError {
    NormalizeError::Invariant(msg)
}

/// `log2 #out ≤ bound`, with a small tolerance for rounding.
fn check_log_bound(what: &str, out: &Formula, bound: f64) -> Result<(), NormalizeError> {
    let got = (out.size() as f64).log2();
    if got > bound + 1e-9 {
        return Err(invariant(format!(
            "{what}: {} nodes exceed 2^{bound:.2}",
            out.size()
        )));
    }
    Ok(())
}

/// Every `GF` argument and every `FG` subformula of `out` is a subformula
/// of `input`.
fn check_limit_origin(input: &Formula, out: &Formula) -> Result<(), NormalizeError> {
    let mut interner = Interner::default();
    interner.id(input);
    let known = interner.distinct();
    let mut bad = None;
    out.preorder(|_, n| {
        let probe = match n {
            Formula::LimitGF(a) => Some(&**a),
            Formula::LimitFG(_) => Some(n),
            _ => None,
        };
        if let Some(g) = probe {
            if bad.is_none() && interner.id(g) >= known {
                bad = Some(g.clone());
            }
        }
    });
    match bad {
        Some(g) => Err(invariant(format!("limit subformula {g} does not occur in the input"))),
        None => Ok(()),
    }
}

fn max_limit_size(f: &Formula) -> usize {
    let mut max = 0;
    f.preorder(|_, n| {
        if n.op().is_limit() {
            max = max.max(n.size());
        }
    });
    max
}

/// Rewrites `f` into the normal form, or its dual with `opts.dual`.
pub fn normalize(f: &Formula, opts: &NormalizeOptions) -> Result<Normalized, NormalizeError> {
    if opts.dual {
        let inner = normalize(&f.negate(), &NormalizeOptions { dual: false, ..opts.clone() })?;
        return Ok(Normalized {
            formula: inner.formula.negate(),
            stage_outputs: inner.stage_outputs.iter().map(Formula::negate).collect(),
            ..inner
        });
    }
    let mut trace = RewriteTrace::new();
    let mut times = [Duration::ZERO; 3];
    let mut outputs = Vec::new();
    let input = if opts.simplify { simplify(f) } else { f.clone() };
    let stages = opts.stage_limit.clamp(1, 3);
    let mut engine = Engine::new(opts, &mut trace);
    engine.check_deadline()?;

    let start = Instant::now();
    let s1 = engine.stage1(&input)?;
    times[0] = start.elapsed();
    let m1 = measures(&s1);
    if m1.ubw != 0 {
        return Err(invariant(format!("stage 1 left {} strong nodes under weak ones", m1.ubw)));
    }
    let n = input.size() as f64;
    check_log_bound("stage 1", &s1, 4.0 * n + n.log2())?;
    if !opts.simplify && !opts.broad_replacement {
        check_limit_origin(&input, &s1)?;
    }
    outputs.push(s1.clone());

    if stages >= 2 {
        let start = Instant::now();
        let s2 = engine.stage2(&s1)?;
        times[1] = start.elapsed();
        let m2 = measures(&s2);
        if m2.ubw != 0 || m2.gfba != 0 {
            return Err(invariant(format!(
                "stage 2 output has ubw {} and {} nested limits",
                m2.ubw, m2.gfba
            )));
        }
        let n1 = m1.nodes as f64;
        check_log_bound("stage 2", &s2, m1.gfba as f64 * 3f64.log2() + n1.log2())?;
        // Simplification may fuse new limit formulas out of `G`/`F` shapes.
        if !opts.simplify && max_limit_size(&s2) > max_limit_size(&s1) {
            return Err(invariant("stage 2 grew a limit subformula".into()));
        }
        outputs.push(s2.clone());

        if stages >= 3 {
            let start = Instant::now();
            let s3 = engine.stage3(&s2)?;
            times[2] = start.elapsed();
            let verdict = is_normal_form(&s3);
            if !verdict.is_pass() {
                return Err(invariant(format!("stage 3 output: {verdict}")));
            }
            check_log_bound("normal form", &s3, 14.0 * f.size() as f64)?;
            outputs.push(s3);
        }
    }
    Ok(Normalized {
        formula: outputs.last().cloned().expect("stage 1 ran"),
        trace,
        stage_times: times,
        stage_outputs: outputs,
    })
}

/// Normalizes `f` with default options.
pub fn normalize_default(f: &Formula) -> Result<Normalized, NormalizeError> {
    normalize(f, &NormalizeOptions::default())
}

/// The dual normal form of `f`: the negation of the normal form of `¬f`.
pub fn normalize_dual(f: &Formula, opts: &NormalizeOptions) -> Result<Normalized, NormalizeError> {
    normalize(f, &NormalizeOptions { dual: true, ..opts.clone() })
}

/// Runs only stage 1, appending its rule applications to `trace`.
pub fn stage1(f: &Formula, opts: &NormalizeOptions, trace: &mut RewriteTrace) -> Result<Formula, NormalizeError> {
    Engine::new(opts, trace).stage1(f)
}

/// Runs only stage 2; expects a formula without `U`/`M` under `W`/`R`.
pub fn stage2(f: &Formula, opts: &NormalizeOptions, trace: &mut RewriteTrace) -> Result<Formula, NormalizeError> {
    Engine::new(opts, trace).stage2(f)
}

/// Runs only stage 3; expects limit formulas only at Boolean positions.
pub fn stage3(f: &Formula, opts: &NormalizeOptions, trace: &mut RewriteTrace) -> Result<Formula, NormalizeError> {
    Engine::new(opts, trace).stage3(f)
}
