//! Bit-parallel evaluation of formulas on batches of lasso words.
//!
//! All words of a batch share one shape `(|prefix|, |loop|)`, so every
//! subformula can be tabulated over the `|prefix| + |loop|` suffix classes
//! with one bit per word.

use std::collections::HashMap;

use crate::formula::{Formula, Name};

use super::LassoWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Instr {
    Const(bool),
    Lit { atom: Option<usize>, negated: bool },
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    /// `x = r | (l & x')`, least (`U`) or greatest (`W`) fixpoint.
    UntilForm { l: usize, r: usize, least: bool },
    /// `x = r & (l | x')`, least (`M`) or greatest (`R`) fixpoint.
    ReleaseForm { l: usize, r: usize, least: bool },
    InfinitelyOften(usize),
    AlmostAlways(usize),
}

/// A formula compiled against a fixed alphabet, one instruction per
/// distinct subformula, children before parents.
#[derive(Clone, Debug)]
pub struct Program {
    instrs: Vec<Instr>,
}

impl Program {
    pub fn compile(f: &Formula, alphabet: &[Name]) -> Program {
        let mut c = Compiler { alphabet, instrs: Vec::new(), by_ptr: HashMap::new(), by_shape: HashMap::new() };
        c.node(f);
        Program { instrs: c.instrs }
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }
}

struct Compiler<'a> {
    alphabet: &'a [Name],
    instrs: Vec<Instr>,
    by_ptr: HashMap<*const Formula, usize>,
    by_shape: HashMap<Instr, usize>,
}

impl Compiler<'_> {
    fn node(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.by_ptr.get(&(f as *const Formula)) {
            return i;
        }
        let instr = match f {
            Formula::True => Instr::Const(true),
            Formula::False => Instr::Const(false),
            Formula::Atom(n) => Instr::Lit { atom: self.atom(n), negated: false },
            Formula::NegAtom(n) => Instr::Lit { atom: self.atom(n), negated: true },
            Formula::And(l, r) => Instr::And(self.node(l), self.node(r)),
            Formula::Or(l, r) => Instr::Or(self.node(l), self.node(r)),
            Formula::Next(a) => Instr::Next(self.node(a)),
            Formula::Until(l, r) => Instr::UntilForm { l: self.node(l), r: self.node(r), least: true },
            Formula::WeakUntil(l, r) => {
                Instr::UntilForm { l: self.node(l), r: self.node(r), least: false }
            }
            Formula::StrongRelease(l, r) => {
                Instr::ReleaseForm { l: self.node(l), r: self.node(r), least: true }
            }
            Formula::Release(l, r) => {
                Instr::ReleaseForm { l: self.node(l), r: self.node(r), least: false }
            }
            Formula::LimitGF(a) => Instr::InfinitelyOften(self.node(a)),
            Formula::LimitFG(a) => Instr::AlmostAlways(self.node(a)),
        };
        // Children are already deduplicated, so the instruction itself is a
        // structural key.
        let index = match self.by_shape.get(&instr) {
            Some(&i) => i,
            None => {
                self.instrs.push(instr);
                let i = self.instrs.len() - 1;
                self.by_shape.insert(instr, i);
                i
            }
        };
        self.by_ptr.insert(f as *const Formula, index);
        index
    }

    fn atom(&self, name: &Name) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }
}

/// A batch of lasso words of one shape, stored as per-atom bit tables.
pub struct Batch {
    prefix: usize,
    positions: usize,
    blocks: usize,
    lanes: usize,
    /// `atoms[a][pos * blocks + block]`
    atoms: Vec<Vec<u64>>,
}

impl Batch {
    /// `letter(lane, pos)` gives the letter mask of word `lane` at `pos`.
    pub fn new(
        prefix: usize,
        cycle: usize,
        lanes: usize,
        atom_count: usize,
        letter: impl Fn(usize, usize) -> u64,
    ) -> Batch {
        assert!(cycle >= 1, "loop must be nonempty");
        let positions = prefix + cycle;
        let blocks = lanes.div_ceil(64).max(1);
        let mut atoms = vec![vec![0u64; positions * blocks]; atom_count];
        for lane in 0..lanes {
            let (block, bit) = (lane / 64, lane % 64);
            for pos in 0..positions {
                let mut m = letter(lane, pos);
                while m != 0 {
                    let a = m.trailing_zeros() as usize;
                    m &= m - 1;
                    if a < atom_count {
                        atoms[a][pos * blocks + block] |= 1 << bit;
                    }
                }
            }
        }
        Batch { prefix, positions, blocks, lanes, atoms }
    }

    pub fn single(w: &LassoWord) -> Batch {
        Batch::new(w.prefix().len(), w.cycle().len(), 1, w.atoms().len(), |_, pos| w.letter(pos))
    }

    pub fn lanes(&self) -> usize {
        self.lanes
    }

    /// Truth value of the program's root at position 0, one bit per lane.
    pub fn run(&self, prog: &Program) -> Vec<u64> {
        let table = self.tabulate(prog);
        table[..self.blocks].to_vec()
    }

    /// Truth table of the root, indexed `pos * blocks + block`.
    pub fn tabulate(&self, prog: &Program) -> Vec<u64> {
        let (n, b) = (self.positions, self.blocks);
        let mut values: Vec<Vec<u64>> = Vec::with_capacity(prog.instrs.len());
        for instr in &prog.instrs {
            let v = match *instr {
                Instr::Const(c) => vec![if c { u64::MAX } else { 0 }; n * b],
                Instr::Lit { atom, negated } => {
                    let base = match atom {
                        Some(a) => self.atoms[a].clone(),
                        None => vec![0; n * b],
                    };
                    if negated {
                        base.into_iter().map(|x| !x).collect()
                    } else {
                        base
                    }
                }
                Instr::And(x, y) => values[x].iter().zip(&values[y]).map(|(a, c)| a & c).collect(),
                Instr::Or(x, y) => values[x].iter().zip(&values[y]).map(|(a, c)| a | c).collect(),
                Instr::Next(x) => {
                    let mut out = vec![0; n * b];
                    for pos in 0..n {
                        let s = self.succ(pos);
                        out[pos * b..(pos + 1) * b].copy_from_slice(&values[x][s * b..(s + 1) * b]);
                    }
                    out
                }
                Instr::UntilForm { l, r, least } => {
                    self.fixpoint(&values[l], &values[r], least, |l, r, next| r | (l & next))
                }
                Instr::ReleaseForm { l, r, least } => {
                    self.fixpoint(&values[l], &values[r], least, |l, r, next| r & (l | next))
                }
                Instr::InfinitelyOften(x) => self.on_loop(&values[x], false),
                Instr::AlmostAlways(x) => self.on_loop(&values[x], true),
            };
            values.push(v);
        }
        values.pop().expect("empty program")
    }

    fn succ(&self, pos: usize) -> usize {
        if pos + 1 < self.positions {
            pos + 1
        } else {
            self.prefix
        }
    }

    // Backward sweeps: two around the loop, the first seeded at the seam
    // with the fixpoint's default, then one through the prefix.
    fn fixpoint(&self, l: &[u64], r: &[u64], least: bool, step: impl Fn(u64, u64, u64) -> u64) -> Vec<u64> {
        let (n, b, p) = (self.positions, self.blocks, self.prefix);
        let mut x = vec![0u64; n * b];
        for block in 0..b {
            let mut next = if least { 0 } else { u64::MAX };
            for _ in 0..2 {
                for pos in (p..n).rev() {
                    let i = pos * b + block;
                    x[i] = step(l[i], r[i], next);
                    next = x[i];
                }
            }
            for pos in (0..p).rev() {
                let i = pos * b + block;
                x[i] = step(l[i], r[i], next);
                next = x[i];
            }
        }
        x
    }

    fn on_loop(&self, a: &[u64], all: bool) -> Vec<u64> {
        let (n, b, p) = (self.positions, self.blocks, self.prefix);
        let mut out = vec![0u64; n * b];
        for block in 0..b {
            let mut acc = if all { u64::MAX } else { 0 };
            for pos in p..n {
                let v = a[pos * b + block];
                acc = if all { acc & v } else { acc | v };
            }
            for pos in 0..n {
                out[pos * b + block] = acc;
            }
        }
        out
    }
}

/// Whether `w ⊨ f`. Atoms of `f` missing from the word's alphabet are false.
pub fn evaluate(w: &LassoWord, f: &Formula) -> bool {
    let prog = Program::compile(f, w.atoms());
    Batch::single(w).run(&prog)[0] & 1 == 1
}

/// Truth of `f` at each of the `|prefix| + |loop|` suffix classes of `w`.
pub fn evaluate_positions(w: &LassoWord, f: &Formula) -> Vec<bool> {
    let prog = Program::compile(f, w.atoms());
    Batch::single(w).tabulate(&prog).iter().map(|x| x & 1 == 1).collect()
}

/// A formula compiled once for repeated single-word evaluation over a fixed
/// alphabet.
pub struct Evaluator {
    alphabet: Vec<Name>,
    program: Program,
}

impl Evaluator {
    pub fn new(f: &Formula, alphabet: &[Name]) -> Evaluator {
        Evaluator { alphabet: alphabet.to_vec(), program: Program::compile(f, alphabet) }
    }

    /// Panics if `w` ranges over a different alphabet.
    pub fn eval(&self, w: &LassoWord) -> bool {
        assert_eq!(w.atoms(), &self.alphabet[..], "alphabet mismatch");
        Batch::single(w).run(&self.program)[0] & 1 == 1
    }
}
