use std::fmt;

use crate::formula::Name;

use super::OracleError;

/// Largest alphabet a lasso word can range over; letters are bitmasks.
pub const MAX_ATOMS: usize = 64;

/// An ultimately periodic word `prefix · loop^ω` over subsets of `atoms`.
///
/// Letters are bitmasks: bit `i` set means `atoms[i]` holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    atoms: Vec<Name>,
    prefix: Vec<u64>,
    cycle: Vec<u64>,
}

impl LassoWord {
    /// Builds a word; `atoms` is sorted and deduplicated, letters are
    /// given as masks over the sorted atoms.
    pub fn new(mut atoms: Vec<Name>, prefix: Vec<u64>, cycle: Vec<u64>) -> Result<Self, OracleError> {
        let n = atoms.len();
        atoms.sort();
        atoms.dedup();
        if atoms.len() != n {
            return Err(OracleError::DuplicateAtom);
        }
        if n > MAX_ATOMS {
            return Err(OracleError::TooManyAtoms(n));
        }
        if cycle.is_empty() {
            return Err(OracleError::EmptyLoop);
        }
        let allowed = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if prefix.iter().chain(&cycle).any(|l| l & !allowed != 0) {
            return Err(OracleError::LetterOutOfRange);
        }
        Ok(LassoWord { atoms, prefix, cycle })
    }

    /// Builds a word from letters given as lists of atom names.
    pub fn from_sets<S: AsRef<str>>(
        atoms: &[S],
        prefix: &[&[S]],
        cycle: &[&[S]],
    ) -> Result<Self, OracleError> {
        let mut names: Vec<Name> = atoms.iter().map(|a| Name::from(a.as_ref())).collect();
        names.sort();
        names.dedup();
        let mask = |letter: &[S]| -> Result<u64, OracleError> {
            letter.iter().try_fold(0u64, |m, a| {
                names
                    .iter()
                    .position(|n| &**n == a.as_ref())
                    .map(|i| m | 1 << i)
                    .ok_or_else(|| OracleError::UnknownAtom(a.as_ref().to_string()))
            })
        };
        let prefix = prefix.iter().map(|l| mask(l)).collect::<Result<_, _>>()?;
        let cycle = cycle.iter().map(|l| mask(l)).collect::<Result<_, _>>()?;
        LassoWord::new(names, prefix, cycle)
    }

    pub fn atoms(&self) -> &[Name] {
        &self.atoms
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u64] {
        &self.cycle
    }

    /// Number of distinct suffixes, `|prefix| + |loop|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// The letter at position `i` of the infinite word.
    pub fn letter(&self, i: usize) -> u64 {
        let p = self.prefix.len();
        if i < p {
            self.prefix[i]
        } else {
            self.cycle[(i - p) % self.cycle.len()]
        }
    }

    pub fn holds(&self, i: usize, atom: &str) -> bool {
        match self.atoms.iter().position(|a| &**a == atom) {
            Some(bit) => self.letter(i) >> bit & 1 == 1,
            None => false,
        }
    }

    /// The suffix starting at loop position `i`: the loop rotated by `i`,
    /// with an empty prefix.
    pub fn rotated(&self, i: usize) -> LassoWord {
        let l = self.cycle.len();
        let cycle = (0..l).map(|k| self.cycle[(i + k) % l]).collect();
        LassoWord { atoms: self.atoms.clone(), prefix: Vec::new(), cycle }
    }

    /// The word `extra · prefix · loop^ω`.
    pub fn with_prepended(&self, extra: &[u64]) -> LassoWord {
        let mut prefix = extra.to_vec();
        prefix.extend_from_slice(&self.prefix);
        LassoWord { atoms: self.atoms.clone(), prefix, cycle: self.cycle.clone() }
    }

    fn write_letter(&self, f: &mut fmt::Formatter<'_>, letter: u64) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (i, a) in self.atoms.iter().enumerate() {
            if letter >> i & 1 == 1 {
                if !first {
                    f.write_str(",")?;
                }
                f.write_str(a)?;
                first = false;
            }
        }
        f.write_str("}")
    }
}

/// Prints e.g. `{}({a,b}{b})^w`.
impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.prefix {
            self.write_letter(f, l)?;
        }
        f.write_str("(")?;
        for &l in &self.cycle {
            self.write_letter(f, l)?;
        }
        f.write_str(")^w")
    }
}

/// Number of lasso words with `|prefix| ≤ max_prefix` and
/// `1 ≤ |loop| ≤ max_loop` over `atom_count` atoms, or `None` on overflow.
pub fn lasso_count(atom_count: usize, max_prefix: usize, max_loop: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for p in 0..=max_prefix {
        for l in 1..=max_loop {
            total = total.checked_add(shape_count(atom_count, p + l)?)?;
        }
    }
    Some(total)
}

/// Number of words of a fixed total length `len`.
pub(crate) fn shape_count(atom_count: usize, len: usize) -> Option<u128> {
    let bits = atom_count.checked_mul(len)?;
    if bits >= 128 {
        return None;
    }
    Some(1u128 << bits)
}

/// Lasso shapes `(prefix, loop)` in enumeration order: shorter total
/// length first, then shorter prefix.
pub(crate) fn shapes(max_prefix: usize, max_loop: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for total in 1..=max_prefix + max_loop {
        for p in 0..=max_prefix.min(total - 1) {
            let l = total - p;
            if (1..=max_loop).contains(&l) {
                out.push((p, l));
            }
        }
    }
    out
}

/// Letter at position `pos` of the `index`-th word of a shape with `len`
/// letters; the first letter is the most significant digit.
pub(crate) fn digit(index: u128, pos: usize, len: usize, atom_count: usize) -> u64 {
    if atom_count == 0 {
        return 0;
    }
    let shift = atom_count * (len - 1 - pos);
    ((index >> shift) & ((1u128 << atom_count) - 1)) as u64
}

/// All lasso words up to the bounds, in deterministic order: shorter words
/// first, then shorter prefixes, then lexicographic by letter masks.
pub fn enumerate_lassos(
    atoms: &[Name],
    max_prefix: usize,
    max_loop: usize,
) -> impl Iterator<Item = LassoWord> {
    let mut atoms = atoms.to_vec();
    atoms.sort();
    atoms.dedup();
    let k = atoms.len();
    shapes(max_prefix, max_loop).into_iter().flat_map(move |(p, l)| {
        let atoms = atoms.clone();
        let count = shape_count(k, p + l).expect("enumeration too large");
        (0..count).map(move |index| {
            let letters: Vec<u64> = (0..p + l).map(|pos| digit(index, pos, p + l, k)).collect();
            LassoWord {
                atoms: atoms.clone(),
                prefix: letters[..p].to_vec(),
                cycle: letters[p..].to_vec(),
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<Name> {
        xs.iter().map(|x| Name::from(*x)).collect()
    }

    #[test]
    fn display() {
        let w = LassoWord::from_sets(&["a", "b"], &[&[]], &[&["a", "b"], &["b"]]).unwrap();
        assert_eq!(w.to_string(), "{}({a,b}{b})^w");
        let w = LassoWord::from_sets(&["a"], &[], &[&["a"]]).unwrap();
        assert_eq!(w.to_string(), "({a})^w");
    }

    #[test]
    fn enumeration_examples() {
        let words: Vec<String> =
            enumerate_lassos(&names(&["a"]), 0, 1).map(|w| w.to_string()).collect();
        assert_eq!(words, ["({})^w", "({a})^w"]);
        // every word has at least one letter in its loop, so a one-letter
        // prefix adds a second word even over the empty alphabet
        assert_eq!(enumerate_lassos(&[], 1, 1).count(), 2);
        assert_eq!(enumerate_lassos(&names(&["a"]), 1, 1).count(), 6);
    }

    #[test]
    fn counts_match_enumeration() {
        for k in 0..3 {
            let atoms = names(&["a", "b", "c"][..k]);
            for (p, l) in [(0, 1), (1, 2), (2, 2), (3, 1)] {
                assert_eq!(
                    enumerate_lassos(&atoms, p, l).count() as u128,
                    lasso_count(k, p, l).unwrap()
                );
            }
        }
        assert_eq!(lasso_count(2, 3, 3), Some(85 * 84));
    }

    #[test]
    fn order_is_short_first_then_lexicographic() {
        let words: Vec<LassoWord> = enumerate_lassos(&names(&["a"]), 1, 2).collect();
        let lens: Vec<(usize, usize)> =
            words.iter().map(|w| (w.prefix().len() + w.cycle().len(), w.prefix().len())).collect();
        let mut sorted = lens.clone();
        sorted.sort();
        assert_eq!(lens, sorted);
        assert_eq!(words[2].to_string(), "({}{})^w");
        assert_eq!(words[3].to_string(), "({}{a})^w");
    }

    #[test]
    fn invalid_words() {
        assert_eq!(LassoWord::new(names(&["a"]), vec![], vec![]), Err(OracleError::EmptyLoop));
        assert_eq!(
            LassoWord::new(names(&["a"]), vec![2], vec![0]),
            Err(OracleError::LetterOutOfRange)
        );
        assert!(LassoWord::from_sets(&["a"], &[], &[&["b"]]).is_err());
    }

    #[test]
    fn rotation_and_prepending() {
        let w = LassoWord::from_sets(&["a"], &[&[]], &[&["a"], &[]]).unwrap();
        assert_eq!(w.rotated(1).to_string(), "({}{a})^w");
        assert_eq!(w.with_prepended(&[1]).to_string(), "{a}{}({a}{})^w");
        assert!(w.holds(1, "a") && !w.holds(2, "a") && w.holds(3, "a"));
        assert!(!w.holds(1, "zz"));
    }
}
