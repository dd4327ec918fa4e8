use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::formula::{Formula, Name};

use super::eval::{Batch, Program};
use super::lasso::{digit, lasso_count, shape_count, shapes};
use super::{LassoWord, OracleError};

/// Largest number of words an exhaustive check enumerates by default.
pub const DEFAULT_CEILING: u128 = 1 << 22;

const CHUNK: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivMode {
    Exhaustive,
    /// `samples` words drawn uniformly from the bounded word space.
    Sampled { samples: usize, seed: u64 },
}

/// Result of a bounded equivalence check.
///
/// `EquivalentUpToBound` only means no distinguishing word exists within
/// the checked bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivVerdict {
    EquivalentUpToBound { words_checked: u128 },
    Counterexample(LassoWord),
}

impl EquivVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivVerdict::EquivalentUpToBound { .. })
    }

    pub fn counterexample(&self) -> Option<&LassoWord> {
        match self {
            EquivVerdict::Counterexample(w) => Some(w),
            EquivVerdict::EquivalentUpToBound { .. } => None,
        }
    }
}

/// Bounds and mode of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivOptions {
    pub max_prefix: usize,
    pub max_loop: usize,
    pub mode: EquivMode,
    /// Exhaustive checks larger than this fail with `BoundTooLarge`.
    pub ceiling: u128,
}

impl EquivOptions {
    pub fn exhaustive(max_prefix: usize, max_loop: usize) -> Self {
        EquivOptions { max_prefix, max_loop, mode: EquivMode::Exhaustive, ceiling: DEFAULT_CEILING }
    }

    pub fn sampled(max_prefix: usize, max_loop: usize, samples: usize, seed: u64) -> Self {
        EquivOptions {
            max_prefix,
            max_loop,
            mode: EquivMode::Sampled { samples, seed },
            ceiling: DEFAULT_CEILING,
        }
    }
}

/// Compares `f` and `g` on lasso words over their joint atoms.
pub fn bounded_equiv(
    f: &Formula,
    g: &Formula,
    max_prefix: usize,
    max_loop: usize,
    mode: EquivMode,
) -> Result<EquivVerdict, OracleError> {
    bounded_equiv_with(f, g, EquivOptions { max_prefix, max_loop, mode, ceiling: DEFAULT_CEILING })
}

pub fn bounded_equiv_with(f: &Formula, g: &Formula, opts: EquivOptions) -> Result<EquivVerdict, OracleError> {
    let mut atoms = f.atoms();
    atoms.extend(g.atoms());
    atoms.sort();
    atoms.dedup();
    let checker = Checker::new(f, g, atoms, opts.max_prefix, opts.max_loop)?;
    match opts.mode {
        EquivMode::Exhaustive => {
            if checker.total > opts.ceiling {
                return Err(OracleError::BoundTooLarge { words: Some(checker.total), ceiling: opts.ceiling });
            }
            checker.exhaustive()
        }
        EquivMode::Sampled { samples, seed } => checker.sampled(samples, seed),
    }
}

/// True if `w ⊨ f` implies `w ⊨ g` for every word within the bounds.
pub fn bounded_implies(f: &Formula, g: &Formula, opts: EquivOptions) -> Result<bool, OracleError> {
    let implication = Formula::or(f.negate(), g.clone());
    Ok(bounded_equiv_with(&implication, &Formula::True, opts)?.is_equivalent())
}

struct Checker {
    atoms: Vec<Name>,
    f: Program,
    g: Program,
    shapes: Vec<(usize, usize)>,
    total: u128,
}

impl Checker {
    fn new(
        f: &Formula,
        g: &Formula,
        atoms: Vec<Name>,
        max_prefix: usize,
        max_loop: usize,
    ) -> Result<Checker, OracleError> {
        if max_loop == 0 {
            return Err(OracleError::EmptyLoop);
        }
        if atoms.len() > super::MAX_ATOMS {
            return Err(OracleError::TooManyAtoms(atoms.len()));
        }
        let total = lasso_count(atoms.len(), max_prefix, max_loop)
            .ok_or(OracleError::BoundTooLarge { words: None, ceiling: 0 })?;
        Ok(Checker {
            f: Program::compile(f, &atoms),
            g: Program::compile(g, &atoms),
            shapes: shapes(max_prefix, max_loop),
            atoms,
            total,
        })
    }

    fn word(&self, p: usize, l: usize, index: u128) -> LassoWord {
        let k = self.atoms.len();
        let letters: Vec<u64> = (0..p + l).map(|pos| digit(index, pos, p + l, k)).collect();
        LassoWord::new(self.atoms.clone(), letters[..p].to_vec(), letters[p..].to_vec())
            .expect("enumerated word is valid")
    }

    /// Index of the first lane where the two programs disagree.
    fn first_difference(&self, batch: &Batch) -> Option<usize> {
        let (x, y) = (batch.run(&self.f), batch.run(&self.g));
        x.iter().zip(&y).enumerate().find_map(|(block, (a, b))| {
            let diff = a ^ b;
            let lane = block * 64 + diff.trailing_zeros() as usize;
            (diff != 0 && lane < batch.lanes()).then_some(lane)
        })
    }

    fn exhaustive(&self) -> Result<EquivVerdict, OracleError> {
        let k = self.atoms.len();
        let mut tasks = Vec::new();
        for &(p, l) in &self.shapes {
            let count = shape_count(k, p + l).expect("bounded by the ceiling");
            let mut start = 0;
            while start < count {
                let len = CHUNK.min(count - start);
                tasks.push((p, l, start, len));
                start += len;
            }
        }
        let hit = tasks.par_iter().find_map_first(|&(p, l, start, len)| {
            let batch = Batch::new(p, l, len as usize, k, |lane, pos| {
                digit(start + lane as u128, pos, p + l, k)
            });
            self.first_difference(&batch)
                .map(|lane| self.word(p, l, start + lane as u128))
        });
        Ok(match hit {
            Some(w) => EquivVerdict::Counterexample(w),
            None => EquivVerdict::EquivalentUpToBound { words_checked: self.total },
        })
    }

    fn sampled(&self, samples: usize, seed: u64) -> Result<EquivVerdict, OracleError> {
        let k = self.atoms.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // (draw order, shape, index within shape)
        let mut draws: Vec<(usize, usize, u128)> = Vec::with_capacity(samples);
        for n in 0..samples {
            let mut index = rng.gen_range(0..self.total);
            for (s, &(p, l)) in self.shapes.iter().enumerate() {
                let count = shape_count(k, p + l).expect("counted above");
                if index < count {
                    draws.push((n, s, index));
                    break;
                }
                index -= count;
            }
        }
        let mut first: Option<(usize, LassoWord)> = None;
        for (s, &(p, l)) in self.shapes.iter().enumerate() {
            let group: Vec<&(usize, usize, u128)> = draws.iter().filter(|d| d.1 == s).collect();
            if group.is_empty() {
                continue;
            }
            let batch = Batch::new(p, l, group.len(), k, |lane, pos| digit(group[lane].2, pos, p + l, k));
            let (x, y) = (batch.run(&self.f), batch.run(&self.g));
            for (lane, d) in group.iter().enumerate() {
                let differs = (x[lane / 64] ^ y[lane / 64]) >> (lane % 64) & 1 == 1;
                if differs && first.as_ref().is_none_or(|(n, _)| d.0 < *n) {
                    first = Some((d.0, self.word(p, l, d.2)));
                }
            }
        }
        Ok(match first {
            Some((_, w)) => EquivVerdict::Counterexample(w),
            None => EquivVerdict::EquivalentUpToBound { words_checked: samples as u128 },
        })
    }
}
