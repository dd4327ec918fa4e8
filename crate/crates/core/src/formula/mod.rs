//! Extended LTL syntax trees in negation normal form.
//!
//! A [`Formula`] is an immutable tree whose children are reference counted,
//! so cloning is cheap and values can be shared across threads. Negation
//! only ever appears directly above an atom, and the limit operators `GF`
//! and `FG` are single nodes.

mod context;
mod hierarchy;
pub(crate) mod measures;
mod normal_form;
mod parse;
mod render;

use std::fmt;
use std::sync::Arc;

pub use context::{abstract_occurrences, Context, ContextError, Scope, HOLE};
pub use hierarchy::{classify, membership, HierarchyClass, HierarchyKind, Membership};
pub use measures::{limit_obstacles, measures, rank, Measures};
pub use normal_form::{
    is_delta2_decomposable, is_dual_normal_form, is_normal_form, is_stage_form, NormalFormCondition,
    NormalFormVerdict, StageForm,
};
pub use parse::{parse, ParseError, ParseErrorKind};
pub use render::render;

/// Atomic proposition names.
pub type Name = Arc<str>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Name),
    NegAtom(Name),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Next(Arc<Formula>),
    Until(Arc<Formula>, Arc<Formula>),
    WeakUntil(Arc<Formula>, Arc<Formula>),
    /// `M`, the dual of `W`.
    StrongRelease(Arc<Formula>, Arc<Formula>),
    /// `R`, the dual of `U`.
    Release(Arc<Formula>, Arc<Formula>),
    /// `GF`: infinitely often.
    LimitGF(Arc<Formula>),
    /// `FG`: almost always.
    LimitFG(Arc<Formula>),
}

/// Operator tag of a node, without its children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    True,
    False,
    Atom,
    NegAtom,
    And,
    Or,
    Next,
    Until,
    WeakUntil,
    StrongRelease,
    Release,
    LimitGF,
    LimitFG,
}

impl Op {
    /// `X`, `U`, `W`, `M`, `R`, `GF` and `FG`.
    pub fn is_temporal(self) -> bool {
        matches!(
            self,
            Op::Next
                | Op::Until
                | Op::WeakUntil
                | Op::StrongRelease
                | Op::Release
                | Op::LimitGF
                | Op::LimitFG
        )
    }

    pub fn is_limit(self) -> bool {
        matches!(self, Op::LimitGF | Op::LimitFG)
    }

    /// Strong (least fixpoint) binary operators: `U` and `M`.
    pub fn is_until_like(self) -> bool {
        matches!(self, Op::Until | Op::StrongRelease)
    }

    /// Weak (greatest fixpoint) binary operators: `W` and `R`.
    pub fn is_weak_like(self) -> bool {
        matches!(self, Op::WeakUntil | Op::Release)
    }

    pub fn is_boolean(self) -> bool {
        matches!(self, Op::And | Op::Or)
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, Op::True | Op::False | Op::Atom | Op::NegAtom)
    }
}

/// One step from a node to one of its children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Left,
    Right,
    Arg,
}

/// Location of a node, as the sequence of steps from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NodePath(pub Vec<Step>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, step: Step) -> Self {
        let mut steps = self.0.clone();
        steps.push(step);
        NodePath(steps)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Follows the path inside `f`.
    pub fn resolve<'a>(&self, f: &'a Formula) -> Option<&'a Formula> {
        let mut cur = f;
        for step in &self.0 {
            cur = match (step, cur.unary_arg(), cur.binary_args()) {
                (Step::Arg, Some(arg), _) => arg,
                (Step::Left, _, Some((l, _))) => l,
                (Step::Right, _, Some((_, r))) => r,
                _ => return None,
            };
        }
        Some(cur)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for step in &self.0 {
            f.write_str(match step {
                Step::Left => ".left",
                Step::Right => ".right",
                Step::Arg => ".arg",
            })?;
        }
        Ok(())
    }
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn neg_atom(name: &str) -> Formula {
        Formula::NegAtom(Arc::from(name))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn next(arg: Formula) -> Formula {
        Formula::Next(Arc::new(arg))
    }

    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(Arc::new(l), Arc::new(r))
    }

    pub fn weak_until(l: Formula, r: Formula) -> Formula {
        Formula::WeakUntil(Arc::new(l), Arc::new(r))
    }

    pub fn strong_release(l: Formula, r: Formula) -> Formula {
        Formula::StrongRelease(Arc::new(l), Arc::new(r))
    }

    pub fn release(l: Formula, r: Formula) -> Formula {
        Formula::Release(Arc::new(l), Arc::new(r))
    }

    pub fn gf(arg: Formula) -> Formula {
        Formula::LimitGF(Arc::new(arg))
    }

    pub fn fg(arg: Formula) -> Formula {
        Formula::LimitFG(Arc::new(arg))
    }

    /// `F x`, encoded as `true U x`.
    pub fn eventually(arg: Formula) -> Formula {
        Formula::until(Formula::True, arg)
    }

    /// `G x`, encoded as `false R x`.
    pub fn globally(arg: Formula) -> Formula {
        Formula::release(Formula::False, arg)
    }

    /// Builds a binary node with the given operator.
    ///
    /// Panics if `op` is not binary.
    pub fn binary(op: Op, l: Formula, r: Formula) -> Formula {
        match op {
            Op::And => Formula::and(l, r),
            Op::Or => Formula::or(l, r),
            Op::Until => Formula::until(l, r),
            Op::WeakUntil => Formula::weak_until(l, r),
            Op::StrongRelease => Formula::strong_release(l, r),
            Op::Release => Formula::release(l, r),
            _ => panic!("{op:?} is not a binary operator"),
        }
    }

    /// Builds a unary node with the given operator.
    ///
    /// Panics if `op` is not unary.
    pub fn unary(op: Op, arg: Formula) -> Formula {
        match op {
            Op::Next => Formula::next(arg),
            Op::LimitGF => Formula::gf(arg),
            Op::LimitFG => Formula::fg(arg),
            _ => panic!("{op:?} is not a unary operator"),
        }
    }

    pub fn op(&self) -> Op {
        match self {
            Formula::True => Op::True,
            Formula::False => Op::False,
            Formula::Atom(_) => Op::Atom,
            Formula::NegAtom(_) => Op::NegAtom,
            Formula::And(..) => Op::And,
            Formula::Or(..) => Op::Or,
            Formula::Next(_) => Op::Next,
            Formula::Until(..) => Op::Until,
            Formula::WeakUntil(..) => Op::WeakUntil,
            Formula::StrongRelease(..) => Op::StrongRelease,
            Formula::Release(..) => Op::Release,
            Formula::LimitGF(_) => Op::LimitGF,
            Formula::LimitFG(_) => Op::LimitFG,
        }
    }

    pub fn binary_args(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Until(l, r)
            | Formula::WeakUntil(l, r)
            | Formula::StrongRelease(l, r)
            | Formula::Release(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn unary_arg(&self) -> Option<&Formula> {
        match self {
            Formula::Next(a) | Formula::LimitGF(a) | Formula::LimitFG(a) => Some(a),
            _ => None,
        }
    }

    /// Children paired with the step that reaches them.
    pub fn children(&self) -> Children<'_> {
        if let Some(arg) = self.unary_arg() {
            Children { items: [Some((Step::Arg, arg)), None], next: 0 }
        } else if let Some((l, r)) = self.binary_args() {
            Children { items: [Some((Step::Left, l)), Some((Step::Right, r))], next: 0 }
        } else {
            Children { items: [None, None], next: 0 }
        }
    }

    /// Rebuilds the node with every child replaced by `f(child)`.
    pub fn map_children(&self, mut f: impl FnMut(&Formula) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => self.clone(),
            Formula::Next(a) => Formula::next(f(a)),
            Formula::LimitGF(a) => Formula::gf(f(a)),
            Formula::LimitFG(a) => Formula::fg(f(a)),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Until(l, r)
            | Formula::WeakUntil(l, r)
            | Formula::StrongRelease(l, r)
            | Formula::Release(l, r) => {
                let l = f(l);
                let r = f(r);
                Formula::binary(self.op(), l, r)
            }
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::NegAtom(_))
    }

    /// Number of syntax-tree nodes, constants and limit nodes included.
    /// Saturates at `usize::MAX`.
    pub fn size(&self) -> usize {
        measures::tree_size(self)
    }

    pub fn depth(&self) -> usize {
        1 + self.children().map(|(_, c)| c.depth()).max().unwrap_or(0)
    }

    /// Sorted, deduplicated atom names (the placeholder included, if present).
    pub fn atoms(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Name>) {
        match self {
            Formula::Atom(n) | Formula::NegAtom(n) => out.push(n.clone()),
            _ => self.children().for_each(|(_, c)| c.collect_atoms(out)),
        }
    }

    /// Visits every node in preorder together with its path.
    pub fn preorder(&self, mut visit: impl FnMut(&NodePath, &Formula)) {
        fn go(f: &Formula, path: &mut Vec<Step>, visit: &mut dyn FnMut(&NodePath, &Formula)) {
            visit(&NodePath(path.clone()), f);
            for (step, c) in f.children() {
                path.push(step);
                go(c, path, visit);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), &mut visit);
    }

    /// True if some node (the root included) satisfies `pred`.
    pub fn any_node(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().any(|(_, c)| c.any_node(pred))
    }

    /// Returns an NNF formula equivalent to the negation of `self`.
    pub fn negate(&self) -> Formula {
        negate_nnf(self)
    }
}

/// Iterator over at most two children.
pub struct Children<'a> {
    items: [Option<(Step, &'a Formula)>; 2],
    next: usize,
}

impl<'a> Iterator for Children<'a> {
    type Item = (Step, &'a Formula);

    fn next(&mut self) -> Option<Self::Item> {
        while self.next < 2 {
            let item = self.items[self.next].take();
            self.next += 1;
            if item.is_some() {
                return item;
            }
        }
        None
    }
}

/// Dualizes an NNF formula: the result is in NNF and equivalent to `¬f`.
pub fn negate_nnf(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(n) => Formula::NegAtom(n.clone()),
        Formula::NegAtom(n) => Formula::Atom(n.clone()),
        Formula::And(l, r) => Formula::or(negate_nnf(l), negate_nnf(r)),
        Formula::Or(l, r) => Formula::and(negate_nnf(l), negate_nnf(r)),
        Formula::Next(a) => Formula::next(negate_nnf(a)),
        Formula::Until(l, r) => Formula::release(negate_nnf(l), negate_nnf(r)),
        Formula::Release(l, r) => Formula::until(negate_nnf(l), negate_nnf(r)),
        Formula::WeakUntil(l, r) => Formula::strong_release(negate_nnf(l), negate_nnf(r)),
        Formula::StrongRelease(l, r) => Formula::weak_until(negate_nnf(l), negate_nnf(r)),
        Formula::LimitGF(a) => Formula::fg(negate_nnf(a)),
        Formula::LimitFG(a) => Formula::gf(negate_nnf(a)),
    }
}

/// Fuses `false R (true U x)` into `GF x` and `true U (false R x)` into
/// `FG x`, innermost patterns first.
pub fn fuse_limits(f: &Formula) -> Formula {
    let f = f.map_children(fuse_limits);
    match &f {
        Formula::Release(l, r) if **l == Formula::False => match &**r {
            Formula::Until(t, x) if **t == Formula::True => Formula::LimitGF(x.clone()),
            _ => f,
        },
        Formula::Until(l, r) if **l == Formula::True => match &**r {
            Formula::Release(b, x) if **b == Formula::False => Formula::LimitFG(x.clone()),
            _ => f,
        },
        _ => f,
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({self})")
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
