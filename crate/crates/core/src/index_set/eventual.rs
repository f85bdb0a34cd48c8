//! Exact asymptotic analysis of index sets.
//!
//! Write every integer `n >= 2` uniquely as `n = m^g` with `m` not a perfect
//! power. Then `n` is a perfect `e`-th power iff `e | g`, so for an integer
//! outside every `FIN` leaf, membership in a set depends only on its *type*:
//! the residue `n mod L` (`L` the lcm of the AP moduli) together with the
//! set of `POW` exponents dividing `g`. A type is *realizable* when some `n`
//! has it, and every realizable type is attained by infinitely many `n`.
//!
//! Consequences used throughout the crate:
//! - a set is finite iff no realizable type satisfies it, and then all its
//!   members lie among the `FIN` leaf elements;
//! - perfect powers have density zero, so the density of a set along
//!   growing windows is the fraction of residues whose power-free type
//!   satisfies it.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::count::{CountError, Meter};
use super::IndexSet;
use crate::rational::Rational;

/// Membership type of an integer outside every `FIN` leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Type {
    residue: u64,
    /// Bit `i` set iff the integer is a perfect `exponents[i]`-th power.
    powers: u32,
}

/// The realizable types of one set, plus what is needed to evaluate it on them.
#[derive(Debug, Clone)]
pub struct EventualModel {
    set: IndexSet,
    modulus: u64,
    exponents: Vec<u32>,
    types: BTreeSet<Type>,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Carmichael function λ(n), and the largest prime exponent of `n`.
fn carmichael(n: u64) -> (u64, u32) {
    let mut lambda = 1;
    let mut max_exp = 1;
    for (p, k) in factorize(n) {
        max_exp = max_exp.max(k);
        let pk1 = p.pow(k - 1);
        let part = if p == 2 && k >= 3 { pk1 / 2 } else { pk1 * (p - 1) };
        lambda = num_integer::lcm(lambda, part);
    }
    (lambda, max_exp)
}

fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

impl EventualModel {
    /// Enumerates the realizable types of `set`, spending at most `budget`
    /// modular exponentiations.
    pub fn analyze(set: &IndexSet, budget: u64) -> Result<Self, CountError> {
        let mut meter = Meter::new(budget);
        let modulus = set.period();
        let exponents = set.exponents();
        let mut types = BTreeSet::new();
        // g = 1 gives every residue with no power signature.
        meter.charge(modulus)?;
        for residue in 0..modulus {
            types.insert(Type { residue, powers: 0 });
        }
        if !exponents.is_empty() {
            // m ↦ m^g mod L is periodic in g with period λ(L) once g reaches the
            // largest prime exponent of L; the signature is periodic with period
            // lcm(exponents). One joint period past that point covers every type.
            let (lambda, max_exp) = carmichael(modulus);
            let sig_period = exponents
                .iter()
                .fold(1u64, |acc, &e| num_integer::lcm(acc, e as u64));
            let span = num_integer::lcm(lambda, sig_period);
            let last_g = max_exp as u64 + span;
            meter.charge(last_g.saturating_mul(modulus))?;
            for g in 2..=last_g {
                let powers = exponents
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| g % e as u64 == 0)
                    .fold(0u32, |acc, (i, _)| acc | (1 << i));
                for m in 0..modulus {
                    types.insert(Type {
                        residue: mod_pow(m, g, modulus),
                        powers,
                    });
                }
            }
        }
        Ok(Self {
            set: set.clone(),
            modulus,
            exponents,
            types,
        })
    }

    fn holds(&self, node: &IndexSet, t: Type) -> bool {
        match node {
            IndexSet::All => true,
            IndexSet::Empty | IndexSet::Finite(_) => false,
            IndexSet::Ap { modulus, residue } => t.residue % modulus == *residue,
            IndexSet::Pow { exponent } => {
                let i = self
                    .exponents
                    .binary_search(exponent)
                    .expect("exponent collected from the same tree");
                t.powers & (1 << i) != 0
            }
            IndexSet::Not(a) => !self.holds(a, t),
            IndexSet::And(a, b) => self.holds(a, t) && self.holds(b, t),
            IndexSet::Or(a, b) => self.holds(a, t) || self.holds(b, t),
        }
    }

    /// Whether the set has only finitely many members.
    pub fn is_finite(&self) -> bool {
        !self.types.iter().any(|&t| self.holds(&self.set, t))
    }

    /// All members, if the set is finite.
    pub fn finite_members(&self) -> Option<Vec<u64>> {
        if !self.is_finite() {
            return None;
        }
        Some(
            self.set
                .finite_leaf_elements()
                .into_iter()
                .filter(|&k| self.set.contains(k))
                .collect(),
        )
    }

    /// Density of the set along any windows whose width tends to infinity:
    /// the share of residues mod `L` whose power-free type is a member.
    pub fn growing_window_density(&self) -> Rational {
        let hits = (0..self.modulus)
            .filter(|&residue| self.holds(&self.set, Type { residue, powers: 0 }))
            .count();
        Rational::new(BigInt::from(hits), BigInt::from(self.modulus))
    }

    /// Whether the set differs from its periodic skeleton on infinitely many
    /// perfect powers.
    pub fn has_sparse_deviation(&self) -> bool {
        self.types.iter().any(|&t| {
            t.powers != 0
                && self.holds(&self.set, t) != self.holds(&self.set, Type { residue: t.residue, powers: 0 })
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// Natural density `lim |K ∩ [1, n]| / n`, computed from one period of the
/// periodic skeleton (sparse leaves change counts by `o(n)` only).
pub fn natural_density(set: &IndexSet) -> Rational {
    let skeleton = set.periodic_skeleton();
    let period = skeleton.period();
    let hits = (1..=period).filter(|&k| skeleton.contains(k)).count();
    Rational::new(BigInt::from(hits), BigInt::from(period))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::DEFAULT_BUDGET;
    use crate::rational::rat;

    fn model(s: &IndexSet) -> EventualModel {
        EventualModel::analyze(s, DEFAULT_BUDGET).unwrap()
    }

    fn pow(e: u32) -> IndexSet {
        IndexSet::pow(e).unwrap()
    }

    fn ap(c: u64, r: u64) -> IndexSet {
        IndexSet::ap(c, r).unwrap()
    }

    #[test]
    fn carmichael_values() {
        assert_eq!(carmichael(1).0, 1);
        assert_eq!(carmichael(8).0, 2);
        assert_eq!(carmichael(15).0, 4);
        assert_eq!(carmichael(16), (4, 4));
        assert_eq!(carmichael(9).0, 6);
    }

    #[test]
    fn finiteness_decisions() {
        assert!(model(&pow(3).and(pow(3).not())).is_finite());
        // squares that are cubes are sixth powers: infinite
        assert!(!model(&pow(2).and(pow(3))).is_finite());
        // squares ≡ 3 (mod 4) do not exist
        assert!(model(&pow(2).and(ap(4, 3))).is_finite());
        assert!(!model(&pow(2).and(ap(4, 1))).is_finite());
        // sixth powers that are not squares: none
        assert!(model(&pow(6).and(pow(2).not())).is_finite());
        let fin = IndexSet::finite(vec![2, 3, 8]).unwrap();
        assert_eq!(model(&fin.clone().and(pow(3).not())).finite_members(), Some(vec![2, 3]));
        assert_eq!(model(&fin.or(pow(3))).finite_members(), None);
    }

    #[test]
    fn finiteness_agrees_with_a_long_scan() {
        // 1 is every power; cubes ≡ 2 (mod 7) do not exist; cubes ≡ 6 (mod 7) do.
        let none = pow(3).and(ap(7, 2));
        assert!(model(&none).is_finite());
        assert!((1..200_000).all(|n| !none.contains(n)));
        assert!(!model(&pow(3).and(ap(7, 6))).is_finite());
        assert!(pow(3).and(ap(7, 6)).contains(27));
    }

    #[test]
    fn densities() {
        assert_eq!(model(&ap(3, 1)).growing_window_density(), rat(1, 3));
        assert_eq!(model(&pow(3).not()).growing_window_density(), rat(1, 1));
        assert_eq!(model(&ap(2, 0).or(ap(3, 0))).growing_window_density(), rat(2, 3));
        assert_eq!(natural_density(&ap(2, 0).or(ap(3, 0))), rat(2, 3));
        assert_eq!(natural_density(&pow(2).or(ap(5, 1))), rat(1, 5));
    }

    #[test]
    fn sparse_deviation() {
        assert!(model(&pow(2)).has_sparse_deviation());
        assert!(!model(&ap(2, 0).or(IndexSet::finite(vec![3]).unwrap())).has_sparse_deviation());
        assert!(!model(&pow(2).and(ap(4, 3))).has_sparse_deviation());
    }
}
