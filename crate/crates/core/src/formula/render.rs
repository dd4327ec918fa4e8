use std::fmt::{self, Write};

use super::Formula;

// Binding strength of the printed top-level construct.
const OR: u8 = 1;
const AND: u8 = 2;
const BINOP: u8 = 3;
const UNARY: u8 = 4;

/// `true U x`, printed as `F x`.
fn as_eventually(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Until(l, r) if **l == Formula::True => Some(r),
        _ => None,
    }
}

/// `false R x`, printed as `G x`.
fn as_globally(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Release(l, r) if **l == Formula::False => Some(r),
        _ => None,
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ if as_eventually(f).is_some() || as_globally(f).is_some() => UNARY,
        Formula::Until(..)
        | Formula::WeakUntil(..)
        | Formula::StrongRelease(..)
        | Formula::Release(..) => BINOP,
        _ => UNARY,
    }
}

/// Which sugar keyword the operand of a unary construct must not start with.
#[derive(Clone, Copy, PartialEq)]
enum Guard {
    None,
    /// The construct ends in `F`; an operand `G y` would fuse into `G F`.
    AfterF,
    /// The construct ends in `G`; an operand `F y` would fuse into `F G`.
    AfterG,
}

struct Printer<'a> {
    out: &'a mut dyn Write,
}

impl Printer<'_> {
    fn at(&mut self, f: &Formula, min: u8) -> fmt::Result {
        if precedence(f) < min {
            self.out.write_char('(')?;
            self.formula(f)?;
            self.out.write_char(')')
        } else {
            self.formula(f)
        }
    }

    fn operand(&mut self, f: &Formula, guard: Guard) -> fmt::Result {
        match (guard, as_eventually(f), as_globally(f)) {
            (Guard::AfterG, Some(x), _) => {
                self.out.write_str("(true U ")?;
                self.at(x, UNARY)?;
                self.out.write_char(')')
            }
            (Guard::AfterF, _, Some(x)) => {
                self.out.write_str("(false R ")?;
                self.at(x, UNARY)?;
                self.out.write_char(')')
            }
            _ => self.at(f, UNARY),
        }
    }

    fn binop(&mut self, sym: &str, l: &Formula, r: &Formula) -> fmt::Result {
        self.at(l, UNARY)?;
        write!(self.out, " {sym} ")?;
        self.at(r, UNARY)
    }

    fn formula(&mut self, f: &Formula) -> fmt::Result {
        if let Some(x) = as_eventually(f) {
            self.out.write_str("F ")?;
            return self.operand(x, Guard::AfterF);
        }
        if let Some(x) = as_globally(f) {
            self.out.write_str("G ")?;
            return self.operand(x, Guard::AfterG);
        }
        match f {
            Formula::True => self.out.write_str("true"),
            Formula::False => self.out.write_str("false"),
            Formula::Atom(n) => self.out.write_str(n),
            Formula::NegAtom(n) => write!(self.out, "!{n}"),
            Formula::And(l, r) => {
                self.at(l, AND)?;
                self.out.write_str(" & ")?;
                self.at(r, AND + 1)
            }
            Formula::Or(l, r) => {
                self.at(l, OR)?;
                self.out.write_str(" | ")?;
                self.at(r, OR + 1)
            }
            Formula::Next(a) => {
                self.out.write_str("X ")?;
                self.operand(a, Guard::None)
            }
            Formula::Until(l, r) => self.binop("U", l, r),
            Formula::WeakUntil(l, r) => self.binop("W", l, r),
            Formula::StrongRelease(l, r) => self.binop("M", l, r),
            Formula::Release(l, r) => self.binop("R", l, r),
            Formula::LimitGF(a) => {
                self.out.write_str("G F ")?;
                self.operand(a, Guard::AfterF)
            }
            Formula::LimitFG(a) => {
                self.out.write_str("F G ")?;
                self.operand(a, Guard::AfterG)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { out: f }.formula(self)
    }
}

/// Prints `f` in the input syntax; `parse(&render(f)) == f`.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn examples() {
        assert_eq!(render(&Formula::until(a("a"), a("b"))), "a U b");
        assert_eq!(render(&Formula::gf(a("a"))), "G F a");
        assert_eq!(render(&Formula::fg(a("a"))), "F G a");
        assert_eq!(
            render(&Formula::and(Formula::or(a("a"), a("b")), a("c"))),
            "(a | b) & c"
        );
        assert_eq!(render(&Formula::neg_atom("a")), "!a");
        assert_eq!(
            render(&Formula::until(a("a"), Formula::weak_until(a("b"), a("c")))),
            "a U (b W c)"
        );
        assert_eq!(render(&Formula::globally(a("x"))), "G x");
    }

    #[test]
    fn unfused_sugar_does_not_fuse_on_reparse() {
        let cases = [
            Formula::globally(Formula::eventually(a("a"))),
            Formula::eventually(Formula::globally(a("a"))),
            Formula::gf(Formula::globally(a("a"))),
            Formula::fg(Formula::eventually(a("a"))),
            Formula::eventually(Formula::gf(a("a"))),
            Formula::globally(Formula::fg(a("a"))),
            Formula::gf(Formula::fg(a("a"))),
            Formula::fg(Formula::gf(a("a"))),
            Formula::next(Formula::globally(Formula::eventually(a("a")))),
        ];
        for f in cases {
            let text = render(&f);
            assert_eq!(parse(&text).unwrap(), f, "{text}");
        }
        assert_eq!(render(&Formula::globally(Formula::eventually(a("a")))), "G (true U a)");
    }

    #[test]
    fn associativity_round_trips() {
        let l = Formula::or(Formula::or(a("a"), a("b")), a("c"));
        let r = Formula::or(a("a"), Formula::or(a("b"), a("c")));
        assert_eq!(render(&l), "a | b | c");
        assert_eq!(render(&r), "a | (b | c)");
        assert_eq!(parse(&render(&r)).unwrap(), r);
        let w = Formula::weak_until(Formula::until(a("a"), a("b")), a("c"));
        assert_eq!(render(&w), "(a U b) W c");
        assert_eq!(parse(&render(&w)).unwrap(), w);
    }
}
