use thiserror::Error;

use super::Formula;

/// Name of the placeholder atom. The parser cannot produce it.
pub const HOLE: &str = "\u{25a1}";

/// Which occurrences of a target [`abstract_occurrences`] replaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    All,
    /// Occurrences below a `GF`/`FG` node are left in place.
    NotUnderLimit,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("target {0} does not occur in the formula")]
    TargetNotFound(Formula),
    #[error("context has no placeholder")]
    NoHole,
    #[error("placeholder occurs negated")]
    NegativeHole,
}

/// A formula with one or more positive placeholder occurrences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    body: Formula,
    hole_count: usize,
}

pub(crate) fn hole() -> Formula {
    Formula::atom(HOLE)
}

fn is_hole(f: &Formula) -> bool {
    matches!(f, Formula::Atom(n) if &**n == HOLE)
}

impl Context {
    /// The identity context `□`.
    pub fn identity() -> Context {
        Context { body: hole(), hole_count: 1 }
    }

    pub fn new(body: Formula) -> Result<Context, ContextError> {
        let mut count = 0;
        let mut negative = false;
        body.preorder(|_, n| match n {
            Formula::Atom(name) if &**name == HOLE => count += 1,
            Formula::NegAtom(name) if &**name == HOLE => negative = true,
            _ => {}
        });
        if negative {
            return Err(ContextError::NegativeHole);
        }
        if count == 0 {
            return Err(ContextError::NoHole);
        }
        Ok(Context { body, hole_count: count })
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    pub fn hole_count(&self) -> usize {
        self.hole_count
    }

    /// Substitutes `g` for every placeholder.
    pub fn fill(&self, g: &Formula) -> Formula {
        fill_with(&self.body, g)
    }
}

fn fill_with(f: &Formula, g: &Formula) -> Formula {
    if is_hole(f) {
        return g.clone();
    }
    if f.children().next().is_none() {
        return f.clone();
    }
    f.map_children(|c| fill_with(c, g))
}

/// Replaces occurrences of `target` in `f` by the placeholder.
///
/// Occurrences are matched top-down, so an occurrence nested inside another
/// one is swallowed by the outer hole.
pub fn abstract_occurrences(
    f: &Formula,
    target: &Formula,
    scope: Scope,
) -> Result<Context, ContextError> {
    fn go(f: &Formula, target: &Formula, scope: Scope, count: &mut usize) -> Formula {
        if f == target {
            *count += 1;
            return hole();
        }
        if scope == Scope::NotUnderLimit && f.op().is_limit() {
            return f.clone();
        }
        if f.children().next().is_none() {
            return f.clone();
        }
        f.map_children(|c| go(c, target, scope, count))
    }
    let mut count = 0;
    let body = go(f, target, scope, &mut count);
    if count == 0 {
        return Err(ContextError::TargetNotFound(target.clone()));
    }
    Ok(Context { body, hole_count: count })
}

impl From<Context> for Formula {
    fn from(ctx: Context) -> Formula {
        ctx.body
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn abstraction_examples() {
        let t = p("b U c");
        let ctx = abstract_occurrences(&p("(b U c) & X (b U c)"), &t, Scope::All).unwrap();
        assert_eq!(ctx.hole_count(), 2);
        assert_eq!(*ctx.body(), Formula::and(hole(), Formula::next(hole())));

        let ctx =
            abstract_occurrences(&p("(b U c) & G F (b U c)"), &t, Scope::NotUnderLimit).unwrap();
        assert_eq!(ctx.hole_count(), 1);
        assert_eq!(*ctx.body(), Formula::and(hole(), Formula::gf(t.clone())));

        assert_eq!(
            abstract_occurrences(&p("a W b"), &p("c U d"), Scope::All),
            Err(ContextError::TargetNotFound(p("c U d")))
        );
    }

    #[test]
    fn fill_examples() {
        let ctx = Context::new(Formula::weak_until(hole(), Formula::until(Formula::atom("a"), hole())))
            .unwrap();
        assert_eq!(ctx.hole_count(), 2);
        assert_eq!(ctx.fill(&p("X b")), p("(X b) W (a U X b)"));
        assert_eq!(Context::identity().fill(&p("a W b")), p("a W b"));
        let ctx = Context::new(Formula::and(hole(), Formula::next(hole()))).unwrap();
        assert_eq!(ctx.fill(&p("a")), p("a & X a"));
    }

    #[test]
    fn fill_inverts_abstraction() {
        let f = p("(a U b) W ((a U b) & G F (a U b))");
        for scope in [Scope::All, Scope::NotUnderLimit] {
            let ctx = abstract_occurrences(&f, &p("a U b"), scope).unwrap();
            assert_eq!(ctx.fill(&p("a U b")), f);
        }
    }

    #[test]
    fn invalid_contexts_are_rejected() {
        assert_eq!(Context::new(p("a")), Err(ContextError::NoHole));
        assert_eq!(
            Context::new(Formula::NegAtom(Arc::from(HOLE))),
            Err(ContextError::NegativeHole)
        );
    }
}
