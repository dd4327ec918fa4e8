use std::sync::Arc;

use thiserror::Error;

use super::{Formula, Op};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at column {}", .position + 1)]
pub struct ParseError {
    /// Zero-based character offset of the offending token.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown token `{0}`")]
    UnknownToken(char),
    #[error("unexpected `{found}`, expected {expected}")]
    Unexpected { found: String, expected: &'static str },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
}

impl ParseError {
    /// Two-line rendering of `input` with a caret under the error position.
    pub fn caret(&self, input: &str) -> String {
        let line: String = input.chars().map(|c| if c == '\n' { ' ' } else { c }).collect();
        format!("{line}\n{}^", " ".repeat(self.position))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Not,
    And,
    Or,
    Unary(UnaryTok),
    Binary(Op),
    Const(bool),
    Ident(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum UnaryTok {
    Next,
    Eventually,
    Globally,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            'X' => Tok::Unary(UnaryTok::Next),
            'F' => Tok::Unary(UnaryTok::Eventually),
            'G' => Tok::Unary(UnaryTok::Globally),
            'U' => Tok::Binary(Op::Until),
            'W' => Tok::Binary(Op::WeakUntil),
            'R' => Tok::Binary(Op::Release),
            'M' => Tok::Binary(Op::StrongRelease),
            '1' => Tok::Const(true),
            '0' => Tok::Const(false),
            c if c.is_ascii_lowercase() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                match word.as_str() {
                    "true" => Tok::Const(true),
                    "false" => Tok::Const(false),
                    _ => Tok::Ident(word),
                }
            }
            other => {
                return Err(ParseError { position: start, kind: ParseErrorKind::UnknownToken(other) })
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

/// Surface syntax before negations are pushed down and sugar is lowered.
#[derive(Debug)]
enum Raw {
    Const(bool),
    Atom(String),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Unary(UnaryTok, Box<Raw>),
    Binary(Op, Box<Raw>, Box<Raw>),
}

/// Raw syntax in negation normal form; `F` and `G` are still explicit.
#[derive(Debug)]
enum Nnf {
    Const(bool),
    Lit(String, bool),
    Bool(Op, Box<Nnf>, Box<Nnf>),
    Unary(UnaryTok, Box<Nnf>),
    Binary(Op, Box<Nnf>, Box<Nnf>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn error_here(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((p, t)) => ParseError {
                position: *p,
                kind: ParseErrorKind::Unexpected { found: describe(t), expected },
            },
            None => ParseError { position: self.end, kind: ParseErrorKind::UnexpectedEnd { expected } },
        }
    }

    fn disj(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.conj()?;
            lhs = Raw::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.binop()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.binop()?;
            lhs = Raw::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // Right-associative: `a U b W c` is `a U (b W c)`.
    fn binop(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.unary()?;
        if let Some(Tok::Binary(op)) = self.peek() {
            let op = *op;
            self.pos += 1;
            let rhs = self.binop()?;
            return Ok(Raw::Binary(op, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Raw::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Unary(u)) => {
                let u = *u;
                self.pos += 1;
                Ok(Raw::Unary(u, Box::new(self.unary()?)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        const EXPECTED: &str = "a constant, an identifier or `(`";
        match self.peek().cloned() {
            Some(Tok::Const(b)) => {
                self.pos += 1;
                Ok(Raw::Const(b))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Raw::Atom(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.disj()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error_here("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error_here(EXPECTED)),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Not => "!".into(),
        Tok::And => "&".into(),
        Tok::Or => "|".into(),
        Tok::Unary(UnaryTok::Next) => "X".into(),
        Tok::Unary(UnaryTok::Eventually) => "F".into(),
        Tok::Unary(UnaryTok::Globally) => "G".into(),
        Tok::Binary(op) => binary_symbol(*op).into(),
        Tok::Const(true) => "true".into(),
        Tok::Const(false) => "false".into(),
        Tok::Ident(s) => s.clone(),
    }
}

fn binary_symbol(op: Op) -> &'static str {
    match op {
        Op::Until => "U",
        Op::WeakUntil => "W",
        Op::Release => "R",
        Op::StrongRelease => "M",
        _ => unreachable!("not a temporal binary operator"),
    }
}

fn dual_binary(op: Op) -> Op {
    match op {
        Op::Until => Op::Release,
        Op::Release => Op::Until,
        Op::WeakUntil => Op::StrongRelease,
        Op::StrongRelease => Op::WeakUntil,
        Op::And => Op::Or,
        Op::Or => Op::And,
        _ => unreachable!("no dual for {op:?}"),
    }
}

fn to_nnf(raw: Raw, negated: bool) -> Nnf {
    match raw {
        Raw::Const(b) => Nnf::Const(b != negated),
        Raw::Atom(n) => Nnf::Lit(n, negated),
        Raw::Not(inner) => to_nnf(*inner, !negated),
        Raw::And(l, r) => {
            let op = if negated { Op::Or } else { Op::And };
            Nnf::Bool(op, Box::new(to_nnf(*l, negated)), Box::new(to_nnf(*r, negated)))
        }
        Raw::Or(l, r) => {
            let op = if negated { Op::And } else { Op::Or };
            Nnf::Bool(op, Box::new(to_nnf(*l, negated)), Box::new(to_nnf(*r, negated)))
        }
        Raw::Unary(u, inner) => {
            let u = match (u, negated) {
                (UnaryTok::Eventually, true) => UnaryTok::Globally,
                (UnaryTok::Globally, true) => UnaryTok::Eventually,
                (u, _) => u,
            };
            Nnf::Unary(u, Box::new(to_nnf(*inner, negated)))
        }
        Raw::Binary(op, l, r) => {
            let op = if negated { dual_binary(op) } else { op };
            Nnf::Binary(op, Box::new(to_nnf(*l, negated)), Box::new(to_nnf(*r, negated)))
        }
    }
}

/// Which unfused sugar operator a lowered subtree came from.
enum Origin {
    Eventually(Formula),
    Globally(Formula),
    Other,
}

// Children are lowered first, so `F G F a` fuses the inner `G F`.
fn lower(n: Nnf) -> (Formula, Origin) {
    match n {
        Nnf::Const(true) => (Formula::True, Origin::Other),
        Nnf::Const(false) => (Formula::False, Origin::Other),
        Nnf::Lit(name, false) => (Formula::Atom(Arc::from(name)), Origin::Other),
        Nnf::Lit(name, true) => (Formula::NegAtom(Arc::from(name)), Origin::Other),
        Nnf::Bool(op, l, r) | Nnf::Binary(op, l, r) => {
            (Formula::binary(op, lower(*l).0, lower(*r).0), Origin::Other)
        }
        Nnf::Unary(UnaryTok::Next, a) => (Formula::next(lower(*a).0), Origin::Other),
        Nnf::Unary(UnaryTok::Eventually, a) => match lower(*a) {
            (_, Origin::Globally(inner)) => (Formula::fg(inner), Origin::Other),
            (f, _) => (Formula::eventually(f.clone()), Origin::Eventually(f)),
        },
        Nnf::Unary(UnaryTok::Globally, a) => match lower(*a) {
            (_, Origin::Eventually(inner)) => (Formula::gf(inner), Origin::Other),
            (f, _) => (Formula::globally(f.clone()), Origin::Globally(f)),
        },
    }
}

/// Parses a formula, pushes negations down to the atoms and fuses adjacent
/// `G F` / `F G` operator pairs into limit nodes.
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut parser = Parser { toks, pos: 0, end: input.chars().count() };
    let raw = parser.disj()?;
    if parser.pos < parser.toks.len() {
        return Err(parser.error_here("an operator or end of input"));
    }
    Ok(lower(to_nnf(raw, false)).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn basic_shapes() {
        assert_eq!(p("a U b"), Formula::until(a("a"), a("b")));
        assert_eq!(p("G F a"), Formula::gf(a("a")));
        assert_eq!(p("GF a"), Formula::gf(a("a")));
        assert_eq!(p("F G a"), Formula::fg(a("a")));
        assert_eq!(p("true"), Formula::True);
        assert_eq!(p("1 & 0"), Formula::and(Formula::True, Formula::False));
        assert_eq!(p("F a"), Formula::eventually(a("a")));
        assert_eq!(p("G a"), Formula::globally(a("a")));
    }

    #[test]
    fn negation_is_pushed_to_atoms() {
        assert_eq!(
            p("!(a U b)"),
            Formula::release(Formula::neg_atom("a"), Formula::neg_atom("b"))
        );
        assert_eq!(
            p("!(a W b)"),
            Formula::strong_release(Formula::neg_atom("a"), Formula::neg_atom("b"))
        );
        assert_eq!(p("!!a"), a("a"));
        assert_eq!(p("!X a"), Formula::next(Formula::neg_atom("a")));
        assert_eq!(p("!true"), Formula::False);
        assert_eq!(p("!G F a"), Formula::fg(Formula::neg_atom("a")));
        assert_eq!(
            p("!(a & b)"),
            Formula::or(Formula::neg_atom("a"), Formula::neg_atom("b"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // unary > U/W/R/M > & > |
        assert_eq!(
            p("X a U b & c | d"),
            Formula::or(
                Formula::and(Formula::until(Formula::next(a("a")), a("b")), a("c")),
                a("d")
            )
        );
        assert_eq!(p("a U b W c"), Formula::until(a("a"), Formula::weak_until(a("b"), a("c"))));
        assert_eq!(p("a & b & c"), Formula::and(Formula::and(a("a"), a("b")), a("c")));
    }

    #[test]
    fn limit_fusion_binds_innermost_pair() {
        assert_eq!(p("F G F a"), Formula::eventually(Formula::gf(a("a"))));
        assert_eq!(p("G F G a"), Formula::globally(Formula::fg(a("a"))));
        // explicit binary spelling is not sugar and does not fuse
        assert_eq!(
            p("false R (true U a)"),
            Formula::globally(Formula::eventually(a("a")))
        );
        assert_eq!(p("G (F a)"), Formula::gf(a("a")));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("a U").unwrap_err();
        assert_eq!(e.position, 3);
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));

        let e = parse("a W (").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));

        let e = parse("a # b").unwrap_err();
        assert_eq!(e, ParseError { position: 2, kind: ParseErrorKind::UnknownToken('#') });

        let e = parse("a b").unwrap_err();
        assert_eq!(e.position, 2);

        let e = parse("(a U b").unwrap_err();
        assert!(e.to_string().contains("`)`"));
        assert_eq!(parse("a U )").unwrap_err().caret("a U )"), "a U )\n    ^");
    }

    #[test]
    fn placeholder_symbol_is_rejected() {
        let e = parse("a & \u{25a1}").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownToken('\u{25a1}'));
        assert!(parse("Ab").is_err());
    }
}
