use std::fmt;

use super::{measures, membership, Formula, NodePath, Op};

/// The three conditions of the normal form, in checking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormalFormCondition {
    /// No `U`/`M` node under a `W`/`R` node (swapped for the dual form).
    NoStrongUnderWeak,
    /// No limit node under another temporal node.
    NoLimitUnderTemporal,
    /// No `W`/`R` node under `GF` and no `U`/`M` node under `FG`.
    NoObstacleUnderLimit,
}

impl NormalFormCondition {
    pub fn number(self) -> u8 {
        match self {
            NormalFormCondition::NoStrongUnderWeak => 1,
            NormalFormCondition::NoLimitUnderTemporal => 2,
            NormalFormCondition::NoObstacleUnderLimit => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalFormVerdict {
    Pass,
    /// The first violated condition and the preorder-first offending node.
    Violation { condition: NormalFormCondition, path: NodePath },
}

impl NormalFormVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, NormalFormVerdict::Pass)
    }
}

impl fmt::Display for NormalFormVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalFormVerdict::Pass => f.write_str("pass"),
            NormalFormVerdict::Violation { condition, path } => {
                write!(f, "condition {} violated at {path}", condition.number())
            }
        }
    }
}

/// Preorder-first node satisfying `offends(op, ancestors)`.
fn find(f: &Formula, offends: &dyn Fn(Op, &[Op]) -> bool) -> Option<NodePath> {
    fn go(
        f: &Formula,
        steps: &mut Vec<super::Step>,
        ancestors: &mut Vec<Op>,
        offends: &dyn Fn(Op, &[Op]) -> bool,
    ) -> Option<NodePath> {
        if offends(f.op(), ancestors) {
            return Some(NodePath(steps.clone()));
        }
        ancestors.push(f.op());
        for (step, c) in f.children() {
            steps.push(step);
            let hit = go(c, steps, ancestors, offends);
            steps.pop();
            if hit.is_some() {
                ancestors.pop();
                return hit;
            }
        }
        ancestors.pop();
        None
    }
    go(f, &mut Vec::new(), &mut Vec::new(), offends)
}

type OpClass = fn(Op) -> bool;
type Offends<'a> = &'a dyn Fn(Op, &[Op]) -> bool;

fn check(f: &Formula, dual: bool) -> NormalFormVerdict {
    let (outer, inner): (OpClass, OpClass) = if dual {
        (Op::is_until_like, Op::is_weak_like)
    } else {
        (Op::is_weak_like, Op::is_until_like)
    };
    let conditions: [(NormalFormCondition, Offends); 3] = [
        (NormalFormCondition::NoStrongUnderWeak, &|op, anc| {
            inner(op) && anc.iter().any(|a| outer(*a))
        }),
        (NormalFormCondition::NoLimitUnderTemporal, &|op, anc| {
            op.is_limit() && anc.iter().any(|a| a.is_temporal())
        }),
        (NormalFormCondition::NoObstacleUnderLimit, &|op, anc| {
            (op.is_weak_like() && anc.contains(&Op::LimitGF))
                || (op.is_until_like() && anc.contains(&Op::LimitFG))
        }),
    ];
    for (condition, offends) in conditions {
        if let Some(path) = find(f, offends) {
            return NormalFormVerdict::Violation { condition, path };
        }
    }
    NormalFormVerdict::Pass
}

pub fn is_normal_form(f: &Formula) -> NormalFormVerdict {
    check(f, false)
}

/// Normal form with the roles of `U`/`M` and `W`/`R` swapped in the first
/// condition; a formula is in it iff its negation is in normal form.
pub fn is_dual_normal_form(f: &Formula) -> NormalFormVerdict {
    check(f, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StageForm {
    /// No `U`/`M` node under a `W`/`R` node outside limit subformulas.
    First,
    /// First form, and no limit node under a temporal node.
    Second,
}

pub fn is_stage_form(f: &Formula, stage: StageForm) -> bool {
    let m = measures(f);
    match stage {
        StageForm::First => m.ubw == 0,
        StageForm::Second => m.ubw == 0 && m.gfba == 0,
    }
}

/// True if `f` is a positive Boolean combination of `Σ₂` formulas and
/// formulas `GF ψ` with `ψ ∈ Σ₁`.
pub fn is_delta2_decomposable(f: &Formula) -> bool {
    match f {
        Formula::And(l, r) | Formula::Or(l, r) => {
            membership(f).sigma <= 2 || (is_delta2_decomposable(l) && is_delta2_decomposable(r))
        }
        Formula::LimitGF(a) if membership(a).sigma <= 1 => true,
        _ => membership(f).sigma <= 2,
    }
}
