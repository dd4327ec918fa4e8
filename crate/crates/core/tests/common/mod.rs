#![allow(dead_code)]

use delta2::formula::{Formula, HOLE};
use delta2::oracle::LassoWord;
use proptest::prelude::*;

/// Position after `i` in a lasso with `p` prefix letters and `n` positions.
pub fn succ(i: usize, p: usize, n: usize) -> usize {
    if i + 1 < n {
        i + 1
    } else {
        p
    }
}

/// Truth of the node `f` at position `i`, unrolling fixpoints over `n`
/// steps. `atom(name, i)` gives letters and `child(k, j)` the truth of
/// child `k` at position `j`.
pub fn naive_node(
    f: &Formula,
    i: usize,
    p: usize,
    n: usize,
    atom: &dyn Fn(&str, usize) -> bool,
    child: &dyn Fn(usize, usize) -> bool,
) -> bool {
    let l = |j| child(0, j);
    let r = |j| child(1, j);
    let walk = |stop: &dyn Fn(usize) -> Option<bool>, end: bool| {
        let mut j = i;
        for _ in 0..n {
            if let Some(v) = stop(j) {
                return v;
            }
            j = succ(j, p, n);
        }
        end
    };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => atom(a, i),
        Formula::NegAtom(a) => !atom(a, i),
        Formula::And(..) => l(i) && r(i),
        Formula::Or(..) => l(i) || r(i),
        Formula::Next(_) => l(succ(i, p, n)),
        Formula::Until(..) | Formula::WeakUntil(..) => {
            let step = |j| if r(j) { Some(true) } else if !l(j) { Some(false) } else { None };
            walk(&step, matches!(f, Formula::WeakUntil(..)))
        }
        Formula::StrongRelease(..) | Formula::Release(..) => {
            let step = |j| if !r(j) { Some(false) } else if l(j) { Some(true) } else { None };
            walk(&step, matches!(f, Formula::Release(..)))
        }
        Formula::LimitGF(_) => (p..n).any(l),
        Formula::LimitFG(_) => (p..n).all(l),
    }
}

/// Reference semantics by direct recursion on the formula.
pub fn naive_holds(f: &Formula, w: &LassoWord, i: usize) -> bool {
    let p = w.prefix().len();
    let n = p + w.cycle().len();
    let kids: Vec<&Formula> = f.children().map(|(_, c)| c).collect();
    naive_node(f, i, p, n, &|a, j| w.holds(j, a), &|k, j| naive_holds(kids[k], w, j))
}

pub fn arb_formula(atoms: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::True),
        1 => Just(Formula::False),
        4 => proptest::sample::select(atoms).prop_map(Formula::atom),
        3 => proptest::sample::select(atoms).prop_map(Formula::neg_atom),
    ];
    leaf.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            inner.clone().prop_map(Formula::next),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::until(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::weak_until(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::release(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::strong_release(l, r)),
            inner.clone().prop_map(Formula::gf),
            inner.prop_map(Formula::fg),
        ]
    })
    .boxed()
}

pub fn arb_word(atoms: &'static [&'static str]) -> BoxedStrategy<LassoWord> {
    let letter = 0u64..(1 << atoms.len());
    (proptest::collection::vec(letter.clone(), 0..4), proptest::collection::vec(letter, 1..4))
        .prop_map(move |(prefix, cycle)| {
            let names = atoms.iter().map(|a| (*a).into()).collect();
            LassoWord::new(names, prefix, cycle).unwrap()
        })
        .boxed()
}

pub fn hole() -> Formula {
    Formula::atom(HOLE)
}

/// Replaces the leaves at the given preorder leaf indices by the hole.
pub fn punch_holes(f: &Formula, leaves: &[usize]) -> Formula {
    fn go(f: &Formula, leaves: &[usize], next: &mut usize) -> Formula {
        if f.children().next().is_none() {
            let k = *next;
            *next += 1;
            return if leaves.contains(&k) { hole() } else { f.clone() };
        }
        f.map_children(|c| go(c, leaves, next))
    }
    go(f, leaves, &mut 0)
}

pub fn leaf_count(f: &Formula) -> usize {
    let mut n = 0;
    f.preorder(|_, x| {
        if x.children().next().is_none() {
            n += 1;
        }
    });
    n
}
