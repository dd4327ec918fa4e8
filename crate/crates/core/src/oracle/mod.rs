//! Semantics of formulas on ultimately periodic words, and bounded
//! equivalence checking built on it.

mod equiv;
mod eval;
mod lasso;

use thiserror::Error;

pub use equiv::{
    bounded_equiv, bounded_equiv_with, bounded_implies, EquivMode, EquivOptions, EquivVerdict,
    DEFAULT_CEILING,
};
pub use eval::{evaluate, evaluate_positions, Batch, Evaluator, Program};
pub use lasso::{enumerate_lassos, lasso_count, LassoWord, MAX_ATOMS};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("lasso loop must be nonempty")]
    EmptyLoop,
    #[error("{0} atoms exceed the supported alphabet size")]
    TooManyAtoms(usize),
    #[error("duplicate atom in alphabet")]
    DuplicateAtom,
    #[error("letter mentions an atom outside the alphabet")]
    LetterOutOfRange,
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("{} words exceed the enumeration ceiling of {ceiling}", words.map_or("too many".to_string(), |w| w.to_string()))]
    BoundTooLarge { words: Option<u128>, ceiling: u128 },
}
