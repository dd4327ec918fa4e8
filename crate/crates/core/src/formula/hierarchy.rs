use std::fmt;

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HierarchyKind {
    Sigma,
    Pi,
    Delta,
}

/// A class of the temporal hierarchy, such as `Σ₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HierarchyClass {
    pub kind: HierarchyKind,
    pub level: usize,
}

impl fmt::Display for HierarchyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            HierarchyKind::Sigma => "Sigma",
            HierarchyKind::Pi => "Pi",
            HierarchyKind::Delta => "Delta",
        };
        write!(f, "{kind} {}", self.level)
    }
}

impl HierarchyClass {
    /// True if every formula of `self` belongs to `other`.
    pub fn is_within(self, other: HierarchyClass) -> bool {
        use HierarchyKind::*;
        let (k, i, o, j) = (self.kind, self.level, other.kind, other.level);
        if i == 0 {
            return true;
        }
        match (k, o) {
            (_, _) if i < j => true,
            (Sigma, Sigma) | (Pi, Pi) | (Delta, Delta) => i == j,
            (Sigma | Pi, Delta) => i == j,
            _ => false,
        }
    }
}

/// Least levels `i` with the formula in `Σᵢ`, `Πᵢ` and `Δᵢ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Membership {
    pub sigma: usize,
    pub pi: usize,
    pub delta: usize,
}

impl Membership {
    const BASE: Membership = Membership { sigma: 0, pi: 0, delta: 0 };

    // Σ and Π are each closed under the node's operator at levels ≥ `floor`,
    // and Πᵢ ⊆ Σᵢ₊₁, Σᵢ ⊆ Πᵢ₊₁.
    fn closed(sigma: usize, pi: usize) -> (usize, usize) {
        (sigma.min(pi + 1), pi.min(sigma + 1))
    }

    fn temporal(sigma: usize, pi: usize) -> Membership {
        let (sigma, pi) = Membership::closed(sigma, pi);
        Membership { sigma, pi, delta: sigma.min(pi) }
    }

    fn strong(args: &[Membership]) -> Membership {
        let sigma = args.iter().map(|m| m.sigma).max().unwrap_or(0).max(1);
        Membership { sigma, pi: sigma + 1, delta: sigma }
    }

    fn weak(args: &[Membership]) -> Membership {
        let pi = args.iter().map(|m| m.pi).max().unwrap_or(0).max(1);
        Membership { sigma: pi + 1, pi, delta: pi }
    }
}

pub fn membership(f: &Formula) -> Membership {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => Membership::BASE,
        Formula::And(l, r) | Formula::Or(l, r) => {
            let (l, r) = (membership(l), membership(r));
            let (sigma, pi) = Membership::closed(l.sigma.max(r.sigma), l.pi.max(r.pi));
            Membership { sigma, pi, delta: l.delta.max(r.delta).min(sigma).min(pi) }
        }
        Formula::Next(a) => {
            let a = membership(a);
            Membership::temporal(a.sigma.max(1), a.pi.max(1))
        }
        Formula::Until(l, r) | Formula::StrongRelease(l, r) => {
            Membership::strong(&[membership(l), membership(r)])
        }
        Formula::WeakUntil(l, r) | Formula::Release(l, r) => {
            Membership::weak(&[membership(l), membership(r)])
        }
        // GF ψ is read as G (F ψ), FG ψ as F (G ψ).
        Formula::LimitGF(a) => {
            let inner = Membership::strong(&[membership(a)]);
            Membership::weak(&[Membership::BASE, inner])
        }
        Formula::LimitFG(a) => {
            let inner = Membership::weak(&[membership(a)]);
            Membership::strong(&[Membership::BASE, inner])
        }
    }
}

/// The least hierarchy class containing `f`.
///
/// A formula in both `Σᵢ` and `Πᵢ` but in no class of level below `i` is
/// reported as `Σᵢ`; at level 0 all three classes coincide and `Δ₀` is
/// reported.
pub fn classify(f: &Formula) -> HierarchyClass {
    let m = membership(f);
    let (kind, level) = if m.delta < m.sigma.min(m.pi) {
        (HierarchyKind::Delta, m.delta)
    } else if m.pi < m.sigma {
        (HierarchyKind::Pi, m.pi)
    } else if m.sigma == 0 {
        (HierarchyKind::Delta, 0)
    } else {
        (HierarchyKind::Sigma, m.sigma)
    };
    HierarchyClass { kind, level }
}
