use std::collections::{HashMap, HashSet};

use super::{Formula, Op};

/// Size measures of a formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Measures {
    /// Syntax-tree nodes, constants and limit nodes included.
    pub nodes: usize,
    /// Structurally distinct subformulas.
    pub dag_nodes: usize,
    /// `U`/`M` nodes under some `W`/`R` node but under no limit node.
    pub ubw: usize,
    /// Distinct limit subformulas that are proper subformulas of a temporal
    /// subformula.
    pub gfba: usize,
}

fn key(f: &Formula) -> *const Formula {
    f as *const Formula
}

/// Tree size, memoized on shared children so heavily shared formulas are
/// measured in time linear in their distinct allocations.
pub(crate) fn tree_size(f: &Formula) -> usize {
    fn go(f: &Formula, memo: &mut HashMap<*const Formula, usize>) -> usize {
        if let Some(&n) = memo.get(&key(f)) {
            return n;
        }
        let n = f
            .children()
            .fold(1usize, |acc, (_, c)| acc.saturating_add(go(c, memo)));
        memo.insert(key(f), n);
        n
    }
    go(f, &mut HashMap::new())
}

/// Assigns one id per structurally distinct subformula.
#[derive(Default)]
pub(crate) struct Interner {
    by_ptr: HashMap<*const Formula, usize>,
    by_shape: HashMap<(Op, Option<super::Name>, usize, usize), usize>,
}

impl Interner {
    pub(crate) fn id(&mut self, f: &Formula) -> usize {
        if let Some(&id) = self.by_ptr.get(&key(f)) {
            return id;
        }
        let name = match f {
            Formula::Atom(n) | Formula::NegAtom(n) => Some(n.clone()),
            _ => None,
        };
        let mut ids = [usize::MAX; 2];
        for (i, (_, c)) in f.children().enumerate() {
            ids[i] = self.id(c);
        }
        let next = self.by_shape.len();
        let id = *self.by_shape.entry((f.op(), name, ids[0], ids[1])).or_insert(next);
        self.by_ptr.insert(key(f), id);
        id
    }

    pub(crate) fn distinct(&self) -> usize {
        self.by_shape.len()
    }
}

fn count_ubw(f: &Formula, under_weak: bool, memo: &mut HashMap<(*const Formula, bool), usize>) -> usize {
    let op = f.op();
    if op.is_limit() || op.is_leaf() {
        return 0;
    }
    if let Some(&n) = memo.get(&(key(f), under_weak)) {
        return n;
    }
    let below = under_weak || op.is_weak_like();
    let own = usize::from(under_weak && op.is_until_like());
    let n = f
        .children()
        .fold(own, |acc, (_, c)| acc.saturating_add(count_ubw(c, below, memo)));
    memo.insert((key(f), under_weak), n);
    n
}

fn collect_gfba(
    f: &Formula,
    under_temporal: bool,
    seen: &mut HashSet<(*const Formula, bool)>,
    interner: &mut Interner,
    out: &mut HashSet<usize>,
) {
    if !seen.insert((key(f), under_temporal)) {
        return;
    }
    if under_temporal && f.op().is_limit() {
        out.insert(interner.id(f));
    }
    let below = under_temporal || f.op().is_temporal();
    for (_, c) in f.children() {
        collect_gfba(c, below, seen, interner, out);
    }
}

pub fn measures(f: &Formula) -> Measures {
    let mut interner = Interner::default();
    interner.id(f);
    let mut limits = HashSet::new();
    collect_gfba(f, false, &mut HashSet::new(), &mut interner, &mut limits);
    Measures {
        nodes: tree_size(f),
        dag_nodes: interner.distinct(),
        ubw: count_ubw(f, false, &mut HashMap::new()),
        gfba: limits.len(),
    }
}

/// `nodes + ubw`, the quantity that strictly decreases under the first stage.
pub fn rank(f: &Formula) -> usize {
    tree_size(f).saturating_add(count_ubw(f, false, &mut HashMap::new()))
}

/// Nodes that block a limit formula from being in normal form.
///
/// For `GF ψ` these are the `W`/`R` nodes of `ψ` and the `U`/`M` nodes of
/// `ψ` under one of them; for `FG ψ` the roles are swapped. For any other
/// formula the counts of its limit subformulas are summed.
pub fn limit_obstacles(f: &Formula) -> usize {
    fn inside(f: &Formula, blocker: fn(Op) -> bool, nested: fn(Op) -> bool, under: bool) -> usize {
        let op = f.op();
        let own = usize::from(blocker(op) || (under && nested(op)));
        let under = under || blocker(op);
        f.children()
            .fold(own, |acc, (_, c)| acc.saturating_add(inside(c, blocker, nested, under)))
    }
    match f {
        Formula::LimitGF(a) => inside(a, Op::is_weak_like, Op::is_until_like, false),
        Formula::LimitFG(a) => inside(a, Op::is_until_like, Op::is_weak_like, false),
        _ => f
            .children()
            .fold(0usize, |acc, (_, c)| acc.saturating_add(limit_obstacles(c))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn m(s: &str) -> Measures {
        measures(&parse(s).unwrap())
    }

    #[test]
    fn worked_examples() {
        assert_eq!(m("(a U b) W (F G (c U d))").ubw, 1);
        assert_eq!(m("(F G a U G F b) | (G F b W F G a)").gfba, 2);
        assert_eq!(m("a"), Measures { nodes: 1, dag_nodes: 1, ubw: 0, gfba: 0 });
    }

    #[test]
    fn strong_release_counts_as_until() {
        assert_eq!(m("a R (b M c)").ubw, 1);
        assert_eq!(m("a W (b U (c M d))").ubw, 2);
        assert_eq!(m("(a U b) U c").ubw, 0);
    }

    #[test]
    fn dag_counts_shared_subformulas_once() {
        let x = m("(a U b) & (a U b)");
        assert_eq!(x.nodes, 7);
        assert_eq!(x.dag_nodes, 4);
        let y = m("a U (b & X c)");
        assert_eq!(y.nodes, y.dag_nodes);
    }

    #[test]
    fn top_level_limits_are_not_counted() {
        assert_eq!(m("G F a & F G b").gfba, 0);
        assert_eq!(m("X G F a").gfba, 1);
        assert_eq!(m("G F G F a").gfba, 1);
    }

    #[test]
    fn obstacles() {
        let f = parse("G F (a W (b U c))").unwrap();
        assert_eq!(limit_obstacles(&f), 2);
        let f = parse("F G (a W (b U c))").unwrap();
        assert_eq!(limit_obstacles(&f), 1);
        let f = parse("G F (a U b) | F G (a W b)").unwrap();
        assert_eq!(limit_obstacles(&f), 0);
    }

    #[test]
    fn shared_trees_are_sized_quickly() {
        let mut f = Formula::atom("a");
        for _ in 0..80 {
            f = Formula::and(f.clone(), f);
        }
        assert_eq!(tree_size(&f), usize::MAX);
        assert_eq!(measures(&f).dag_nodes, 81);
    }
}
