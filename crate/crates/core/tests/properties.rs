mod common;

use common::{arb_formula, arb_word, naive_holds};
use delta2::formula::{
    abstract_occurrences, classify, is_normal_form, measures, membership, parse, rank, render,
    Formula, Scope,
};
use delta2::oracle::{
    bounded_equiv, bounded_implies, evaluate, evaluate_positions, EquivMode, EquivOptions,
};
use delta2::rewrite::{normalize, simplify, NormalizeOptions};
use proptest::prelude::*;

const AB: &[&str] = &["a", "b"];
const ABC: &[&str] = &["a", "b", "c"];

fn equivalent(f: &Formula, g: &Formula) -> bool {
    bounded_equiv(f, g, 2, 2, EquivMode::Exhaustive).unwrap().is_equivalent()
}

/// Σᵢ and Πᵢ membership straight from the grammar, with limit operators
/// read as `G F x = false R (true U x)` and `F G x = true U (false R x)`.
fn in_class(f: &Formula, i: usize, sigma: bool) -> bool {
    let temporal = f.any_node(&|n| !n.op().is_boolean() && !n.op().is_leaf());
    if !temporal {
        return true;
    }
    if i == 0 {
        return false;
    }
    if in_class(f, i - 1, !sigma) || in_class(f, i - 1, sigma) {
        return true;
    }
    match f {
        Formula::And(l, r) | Formula::Or(l, r) => in_class(l, i, sigma) && in_class(r, i, sigma),
        Formula::Next(a) => in_class(a, i, sigma),
        Formula::Until(l, r) | Formula::StrongRelease(l, r) => {
            sigma && in_class(l, i, true) && in_class(r, i, true)
        }
        Formula::WeakUntil(l, r) | Formula::Release(l, r) => {
            !sigma && in_class(l, i, false) && in_class(r, i, false)
        }
        Formula::LimitGF(a) => in_class(
            &Formula::release(Formula::False, Formula::until(Formula::True, (**a).clone())),
            i,
            sigma,
        ),
        Formula::LimitFG(a) => in_class(
            &Formula::until(Formula::True, Formula::release(Formula::False, (**a).clone())),
            i,
            sigma,
        ),
        _ => true,
    }
}

fn in_delta(f: &Formula, i: usize) -> bool {
    in_class(f, i, true)
        || in_class(f, i, false)
        || match f {
            Formula::And(l, r) | Formula::Or(l, r) => in_delta(l, i) && in_delta(r, i),
            _ => false,
        }
}

fn least(pred: impl Fn(usize) -> bool) -> usize {
    (0..).find(|&i| pred(i)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_parse_round_trip(f in arb_formula(ABC, 5)) {
        prop_assert_eq!(parse(&render(&f)).unwrap(), f);
    }

    #[test]
    fn negation_is_an_involution(f in arb_formula(ABC, 5), w in arb_word(ABC)) {
        let g = f.negate();
        prop_assert_eq!(g.negate(), f.clone());
        prop_assert_eq!(evaluate(&w, &g), !evaluate(&w, &f));
    }

    #[test]
    fn evaluation_matches_naive_unrolling(f in arb_formula(ABC, 5), w in arb_word(ABC)) {
        let fast = evaluate_positions(&w, &f);
        for (i, v) in fast.iter().enumerate() {
            prop_assert_eq!(*v, naive_holds(&f, &w, i), "position {}", i);
        }
    }

    #[test]
    fn loop_rotation(f in arb_formula(ABC, 4), w in arb_word(ABC), k in 0usize..3) {
        let k = k % w.cycle().len();
        let all = evaluate_positions(&w, &f);
        prop_assert_eq!(evaluate(&w.rotated(k), &f), all[w.prefix().len() + k]);
    }

    #[test]
    fn limits_ignore_finite_prefixes(
        f in arb_formula(ABC, 4),
        w in arb_word(ABC),
        extra in proptest::collection::vec(0u64..8, 0..4),
    ) {
        for g in [Formula::gf(f.clone()), Formula::fg(f.clone())] {
            prop_assert_eq!(evaluate(&w, &g), evaluate(&w.with_prepended(&extra), &g));
        }
    }

    #[test]
    fn simplify_is_idempotent_sound_and_shrinking(f in arb_formula(AB, 5)) {
        let s = simplify(&f);
        prop_assert_eq!(simplify(&s), s.clone());
        prop_assert!(s.size() <= f.size());
        prop_assert!(equivalent(&f, &s));
    }

    #[test]
    fn measures_are_consistent(f in arb_formula(ABC, 6)) {
        let m = measures(&f);
        prop_assert!(m.dag_nodes <= m.nodes);
        prop_assert!(m.ubw < m.nodes);
        prop_assert!(m.gfba <= m.dag_nodes);
        prop_assert_eq!(rank(&f), m.nodes + m.ubw);
        prop_assert_eq!(f.negate().size(), m.nodes);
        prop_assert_eq!(measures(&f.negate()).dag_nodes, m.dag_nodes);
    }

    #[test]
    fn classification_matches_grammar(f in arb_formula(AB, 5)) {
        let m = membership(&f);
        prop_assert_eq!(m.sigma, least(|i| in_class(&f, i, true)));
        prop_assert_eq!(m.pi, least(|i| in_class(&f, i, false)));
        prop_assert_eq!(m.delta, least(|i| in_delta(&f, i)));
        let c = classify(&f);
        prop_assert!(c.level <= m.sigma.max(m.pi));
    }

    #[test]
    fn substitution_is_monotone(
        body in arb_formula(AB, 3),
        psi in arb_formula(AB, 2),
        chi in arb_formula(AB, 2),
    ) {
        // Replace every occurrence of `a` (a positive position) by ψ, then
        // by the weaker ψ ∨ χ.
        let ctx = match abstract_occurrences(&body, &Formula::atom("a"), Scope::All) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let strong = ctx.fill(&psi);
        let weak = ctx.fill(&Formula::or(psi.clone(), chi));
        prop_assert!(bounded_implies(&strong, &weak, EquivOptions::exhaustive(2, 2)).unwrap());
        // Equivalent replacements give equivalent formulas.
        let same = ctx.fill(&simplify(&psi));
        prop_assert!(equivalent(&strong, &same));
    }

    #[test]
    fn normalization_is_sound(f in arb_formula(AB, 4), simp in any::<bool>(), broad in any::<bool>()) {
        let opts = NormalizeOptions { simplify: simp, broad_replacement: broad, ..NormalizeOptions::default() };
        let out = normalize(&f, &opts).unwrap();
        prop_assert!(is_normal_form(&out.formula).is_pass(), "{}", out.formula);
        prop_assert!(equivalent(&f, &out.formula), "{} -> {}", f, out.formula);
    }

    #[test]
    fn dual_normalization_is_sound(f in arb_formula(AB, 4)) {
        let opts = NormalizeOptions { dual: true, ..NormalizeOptions::default() };
        let out = normalize(&f, &opts).unwrap();
        prop_assert!(delta2::formula::is_dual_normal_form(&out.formula).is_pass());
        prop_assert!(equivalent(&f, &out.formula));
    }
}
