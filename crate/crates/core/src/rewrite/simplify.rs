//! Local simplification rules applied by smart constructors.
//!
//! Each constructor assumes its arguments are already simplified and either
//! builds the node or returns one of its arguments or a constant, so
//! simplification never grows a formula and is idempotent.

use crate::formula::{Formula, Op};

fn is_true(f: &Formula) -> bool {
    *f == Formula::True
}

fn is_false(f: &Formula) -> bool {
    *f == Formula::False
}

/// `x` if `f` is `true U x` or `x M true`.
fn eventually_arg(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Until(l, r) if is_true(l) => Some(r),
        Formula::StrongRelease(l, r) if is_true(r) => Some(l),
        _ => None,
    }
}

/// `x` if `f` is `false R x` or `x W false`.
fn globally_arg(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Release(l, r) if is_false(l) => Some(r),
        Formula::WeakUntil(l, r) if is_false(r) => Some(l),
        _ => None,
    }
}

pub fn and(l: Formula, r: Formula) -> Formula {
    if is_false(&l) || is_false(&r) {
        Formula::False
    } else if is_true(&l) || l == r {
        r
    } else if is_true(&r) {
        l
    } else {
        Formula::and(l, r)
    }
}

pub fn or(l: Formula, r: Formula) -> Formula {
    if is_true(&l) || is_true(&r) {
        Formula::True
    } else if is_false(&l) || l == r {
        r
    } else if is_false(&r) {
        l
    } else {
        Formula::or(l, r)
    }
}

pub fn next(a: Formula) -> Formula {
    match a {
        Formula::True | Formula::False => a,
        _ => Formula::next(a),
    }
}

pub fn until(l: Formula, r: Formula) -> Formula {
    if is_true(&r) || is_false(&r) || is_false(&l) {
        r
    } else if is_true(&l) {
        match globally_arg(&r) {
            Some(x) => fg(x.clone()),
            None => Formula::until(l, r),
        }
    } else {
        Formula::until(l, r)
    }
}

pub fn weak_until(l: Formula, r: Formula) -> Formula {
    if is_true(&r) || is_true(&l) {
        Formula::True
    } else if is_false(&l) {
        r
    } else if is_false(&r) {
        match eventually_arg(&l) {
            Some(x) => gf(x.clone()),
            None => Formula::weak_until(l, r),
        }
    } else {
        Formula::weak_until(l, r)
    }
}

pub fn release(l: Formula, r: Formula) -> Formula {
    if is_true(&r) || is_false(&r) || is_true(&l) {
        r
    } else if is_false(&l) {
        match eventually_arg(&r) {
            Some(x) => gf(x.clone()),
            None => Formula::release(l, r),
        }
    } else {
        Formula::release(l, r)
    }
}

pub fn strong_release(l: Formula, r: Formula) -> Formula {
    if is_false(&r) || is_false(&l) {
        Formula::False
    } else if is_true(&l) {
        r
    } else if is_true(&r) {
        match globally_arg(&l) {
            Some(x) => fg(x.clone()),
            None => Formula::strong_release(l, r),
        }
    } else {
        Formula::strong_release(l, r)
    }
}

pub fn gf(a: Formula) -> Formula {
    match a {
        Formula::True | Formula::False | Formula::LimitGF(_) | Formula::LimitFG(_) => a,
        _ => Formula::gf(a),
    }
}

pub fn fg(a: Formula) -> Formula {
    match a {
        Formula::True | Formula::False | Formula::LimitGF(_) | Formula::LimitFG(_) => a,
        _ => Formula::fg(a),
    }
}

pub fn binary(op: Op, l: Formula, r: Formula) -> Formula {
    match op {
        Op::And => and(l, r),
        Op::Or => or(l, r),
        Op::Until => until(l, r),
        Op::WeakUntil => weak_until(l, r),
        Op::Release => release(l, r),
        Op::StrongRelease => strong_release(l, r),
        _ => panic!("{op:?} is not a binary operator"),
    }
}

pub fn unary(op: Op, a: Formula) -> Formula {
    match op {
        Op::Next => next(a),
        Op::LimitGF => gf(a),
        Op::LimitFG => fg(a),
        _ => panic!("{op:?} is not a unary operator"),
    }
}

/// Rebuilds `f` bottom-up through the smart constructors.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => f.clone(),
        Formula::Next(a) | Formula::LimitGF(a) | Formula::LimitFG(a) => unary(f.op(), simplify(a)),
        Formula::And(l, r)
        | Formula::Or(l, r)
        | Formula::Until(l, r)
        | Formula::WeakUntil(l, r)
        | Formula::StrongRelease(l, r)
        | Formula::Release(l, r) => binary(f.op(), simplify(l), simplify(r)),
    }
}

/// Rebuilds `f` with the same operator over new children, simplifying
/// the node itself when `enabled`.
pub(crate) fn rebuild(f: &Formula, enabled: bool, mut child: impl FnMut(&Formula) -> Formula) -> Formula {
    if !enabled {
        return f.map_children(child);
    }
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => f.clone(),
        Formula::Next(a) | Formula::LimitGF(a) | Formula::LimitFG(a) => unary(f.op(), child(a)),
        _ => {
            let (l, r) = f.binary_args().expect("binary node");
            let l = child(l);
            let r = child(r);
            binary(f.op(), l, r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn s(text: &str) -> Formula {
        simplify(&parse(text).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(s("false W false"), Formula::False);
        assert_eq!(s("a & true"), parse("a").unwrap());
        assert_eq!(s("G F true"), Formula::True);
        assert_eq!(s("(a U b) | (a U b)"), parse("a U b").unwrap());
        assert_eq!(s("X (a | true)"), Formula::True);
    }

    #[test]
    fn sugar_is_kept() {
        assert_eq!(s("F a"), parse("F a").unwrap());
        assert_eq!(s("G a"), parse("G a").unwrap());
        let g = Formula::weak_until(Formula::atom("a"), Formula::False);
        assert_eq!(simplify(&g), g);
    }

    #[test]
    fn limit_patterns_fuse_after_simplification() {
        assert_eq!(s("G (F a & true)"), parse("G F a").unwrap());
        assert_eq!(s("(true U a) W false"), parse("G F a").unwrap());
        assert_eq!(s("true U (a W false)"), parse("F G a").unwrap());
        assert_eq!(s("G F (G F a)"), parse("G F a").unwrap());
        assert_eq!(s("F G (G F a)"), parse("G F a").unwrap());
    }

    #[test]
    fn release_duals() {
        assert_eq!(s("a R true"), Formula::True);
        assert_eq!(s("a R false"), Formula::False);
        assert_eq!(s("true R a"), parse("a").unwrap());
        assert_eq!(s("a M false"), Formula::False);
        assert_eq!(s("true M a"), parse("a").unwrap());
        assert_eq!(s("false M a"), Formula::False);
    }
}
