use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, Op};

use super::BenchError;

fn atom(i: usize) -> Formula {
    Formula::atom(&format!("a{i}"))
}

/// `(···(((a0 U a1) W a2) U a3) ··· U an)`, with `2n + 1` nodes.
pub fn family_wu_star(n: usize) -> Result<Formula, BenchError> {
    if n < 2 {
        return Err(BenchError::FamilyTooSmall { family: "wu-star", n, min: 2 });
    }
    let mut f = Formula::weak_until(Formula::until(atom(0), atom(1)), atom(2));
    for i in 3..=n {
        f = Formula::until(f, atom(i));
    }
    Ok(f)
}

/// `φ0 = a0`, `φ(k+1) = (φk U a(2k+1)) W a(2k+2)`, with `4n + 1` nodes.
pub fn family_wu_nested(n: usize) -> Formula {
    (0..n).fold(atom(0), |f, k| {
        Formula::weak_until(Formula::until(f, atom(2 * k + 1)), atom(2 * k + 2))
    })
}

/// Relative frequencies of node kinds in random formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OperatorWeights {
    pub atom: u32,
    pub neg_atom: u32,
    pub and: u32,
    pub or: u32,
    pub next: u32,
    pub until: u32,
    pub weak_until: u32,
    pub release: u32,
    pub strong_release: u32,
}

impl Default for OperatorWeights {
    fn default() -> Self {
        OperatorWeights {
            atom: 1,
            neg_atom: 1,
            and: 1,
            or: 1,
            next: 1,
            until: 1,
            weak_until: 1,
            release: 1,
            strong_release: 1,
        }
    }
}

impl OperatorWeights {
    /// Leaves only.
    pub fn atoms_only() -> Self {
        OperatorWeights {
            atom: 1,
            neg_atom: 0,
            and: 0,
            or: 0,
            next: 0,
            until: 0,
            weak_until: 0,
            release: 0,
            strong_release: 0,
        }
    }

    fn binary(&self) -> [(Op, u32); 6] {
        [
            (Op::And, self.and),
            (Op::Or, self.or),
            (Op::Until, self.until),
            (Op::WeakUntil, self.weak_until),
            (Op::Release, self.release),
            (Op::StrongRelease, self.strong_release),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    pub target_size: usize,
    pub atom_count: usize,
    pub weights: OperatorWeights,
}

impl RandomSpec {
    pub fn new(seed: u64, target_size: usize, atom_count: usize) -> Self {
        RandomSpec { seed, target_size, atom_count, weights: OperatorWeights::default() }
    }

    fn validate(&self) -> Result<(), BenchError> {
        let w = &self.weights;
        if self.target_size == 0 {
            return Err(BenchError::InvalidSpec("target size must be at least 1".into()));
        }
        if self.atom_count == 0 {
            return Err(BenchError::InvalidSpec("at least one atom is needed".into()));
        }
        if w.atom == 0 && w.neg_atom == 0 {
            return Err(BenchError::InvalidSpec("leaf weights are all zero".into()));
        }
        Ok(())
    }
}

/// How to produce a benchmark corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    WuStar(usize),
    WuNested(usize),
    Random(RandomSpec),
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    spec: &'a RandomSpec,
}

impl Gen<'_> {
    fn leaf(&mut self) -> Formula {
        let w = &self.spec.weights;
        let name = format!("a{}", self.rng.gen_range(0..self.spec.atom_count));
        if self.rng.gen_range(0..w.atom + w.neg_atom) < w.atom {
            Formula::atom(&name)
        } else {
            Formula::neg_atom(&name)
        }
    }

    /// A formula of exactly `budget` nodes where the weights allow it.
    fn formula(&mut self, budget: usize) -> Formula {
        let w = self.spec.weights;
        let mut choices: Vec<(Option<Op>, u32)> = Vec::with_capacity(7);
        if budget >= 2 && w.next > 0 {
            choices.push((Some(Op::Next), w.next));
        }
        if budget >= 3 {
            choices.extend(w.binary().into_iter().filter(|&(_, x)| x > 0).map(|(op, x)| (Some(op), x)));
        }
        if choices.is_empty() {
            return self.leaf();
        }
        let dist = WeightedIndex::new(choices.iter().map(|c| c.1)).expect("positive weights");
        match choices[dist.sample(&mut self.rng)].0 {
            Some(Op::Next) => Formula::next(self.formula(budget - 1)),
            Some(op) => {
                let left = self.rng.gen_range(1..budget - 1);
                let l = self.formula(left);
                let r = self.formula(budget - 1 - left);
                Formula::binary(op, l, r)
            }
            None => unreachable!(),
        }
    }
}

/// A random NNF formula over `a0..a(k-1)` of about `spec.target_size`
/// nodes, determined by the seed.
pub fn random_formula(spec: &RandomSpec) -> Result<Formula, BenchError> {
    spec.validate()?;
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(spec.seed), spec };
    Ok(g.formula(spec.target_size))
}

/// `count` random formulas with seeds `spec.seed`, `spec.seed + 1`, ...
/// and ids starting at 1.
pub fn random_corpus(spec: &RandomSpec, count: usize) -> Result<Vec<(usize, Formula)>, BenchError> {
    (0..count)
        .map(|i| {
            let s = RandomSpec { seed: spec.seed.wrapping_add(i as u64), ..spec.clone() };
            Ok((i + 1, random_formula(&s)?))
        })
        .collect()
}

/// The formulas a spec describes: one per family member, numbered from 1.
pub fn generate(spec: &GeneratorSpec, count: usize) -> Result<Vec<(usize, Formula)>, BenchError> {
    match spec {
        GeneratorSpec::WuStar(n) => Ok(vec![(1, family_wu_star(*n)?)]),
        GeneratorSpec::WuNested(n) => Ok(vec![(1, family_wu_nested(*n))]),
        GeneratorSpec::Random(r) => random_corpus(r, count),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{classify, parse, render};

    #[test]
    fn wu_star_shapes() {
        assert_eq!(family_wu_star(2).unwrap(), parse("(a0 U a1) W a2").unwrap());
        assert_eq!(family_wu_star(4).unwrap(), parse("(((a0 U a1) W a2) U a3) U a4").unwrap());
        assert!(family_wu_star(1).is_err());
        for n in 2..40 {
            assert_eq!(family_wu_star(n).unwrap().size(), 2 * n + 1);
        }
        assert_eq!(classify(&family_wu_star(3).unwrap()).to_string(), "Sigma 3");
    }

    #[test]
    fn wu_nested_shapes() {
        assert_eq!(family_wu_nested(0), parse("a0").unwrap());
        assert_eq!(family_wu_nested(1), parse("(a0 U a1) W a2").unwrap());
        assert_eq!(family_wu_nested(2), parse("(((a0 U a1) W a2) U a3) W a4").unwrap());
        for n in 0..20 {
            assert_eq!(family_wu_nested(n).size(), 4 * n + 1);
        }
    }

    #[test]
    fn random_is_deterministic_and_sized() {
        let spec = RandomSpec::new(7, 25, 4);
        let f = random_formula(&spec).unwrap();
        assert_eq!(f, random_formula(&spec).unwrap());
        assert!((20..=30).contains(&f.size()), "{}", f.size());
        assert_eq!(parse(&render(&f)).unwrap(), f);

        let one = RandomSpec { weights: OperatorWeights::atoms_only(), ..RandomSpec::new(1, 1, 1) };
        assert_eq!(random_formula(&one).unwrap(), parse("a0").unwrap());
    }

    #[test]
    fn random_sizes_stay_in_envelope() {
        for seed in 0..300 {
            let f = random_formula(&RandomSpec::new(seed, 25, 4)).unwrap();
            let n = f.size();
            assert!((20..=30).contains(&n), "seed {seed}: {n}");
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(random_formula(&RandomSpec::new(0, 0, 2)).is_err());
        assert!(random_formula(&RandomSpec::new(0, 5, 0)).is_err());
        let spec = RandomSpec {
            weights: OperatorWeights { atom: 0, neg_atom: 0, ..OperatorWeights::default() },
            ..RandomSpec::new(0, 5, 2)
        };
        assert!(random_formula(&spec).is_err());
    }
}
