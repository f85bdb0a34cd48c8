//! Finite descriptions of subsets of the positive integers.
//!
//! An [`IndexSet`] is a tree over a small algebra: everything, nothing,
//! explicit finite lists, arithmetic progressions, images of `j ↦ j^e`, and
//! Boolean combinations of those. Membership is decided by structural
//! recursion; window counts use closed forms wherever the tree allows them
//! (see [`count`]); asymptotic questions such as density and finiteness are
//! answered exactly by [`eventual`].

pub mod count;
pub mod eventual;
pub mod parse;

use std::fmt;

use thiserror::Error;

use crate::iroot;

pub use count::{count_window, oracle_count, CountError, WindowCount, DEFAULT_BUDGET};
pub use eventual::{natural_density, EventualModel};
pub use parse::{parse_set, parse_set_with};

/// Maximum structural depth accepted from user input.
pub const MAX_DEPTH: usize = 32;
/// Maximum number of elements in a `FIN(...)` node.
pub const MAX_FINITE: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexSetError {
    #[error("AP modulus must be at least 1")]
    ZeroModulus,
    #[error("AP residue {residue} must be below modulus {modulus}")]
    ResidueOutOfRange { modulus: u64, residue: u64 },
    #[error("POW exponent must be at least 2, got {0}")]
    ExponentTooSmall(u32),
    #[error("FIN elements must be positive integers")]
    NonPositiveElement,
    #[error("FIN holds {0} elements, more than the cap of {MAX_FINITE}")]
    FiniteTooLarge(usize),
    #[error("index set depth {0} exceeds the cap of {MAX_DEPTH}")]
    TooDeep(usize),
}

/// A subset of `{1, 2, 3, ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IndexSet {
    All,
    Empty,
    /// Sorted, deduplicated, positive.
    Finite(Vec<u64>),
    /// `{k >= 1 : k ≡ residue (mod modulus)}`.
    Ap { modulus: u64, residue: u64 },
    /// `{j^exponent : j >= 1}`.
    Pow { exponent: u32 },
    Not(Box<IndexSet>),
    And(Box<IndexSet>, Box<IndexSet>),
    Or(Box<IndexSet>, Box<IndexSet>),
}

impl IndexSet {
    pub fn finite(mut elements: Vec<u64>) -> Result<Self, IndexSetError> {
        if elements.contains(&0) {
            return Err(IndexSetError::NonPositiveElement);
        }
        elements.sort_unstable();
        elements.dedup();
        if elements.len() > MAX_FINITE {
            return Err(IndexSetError::FiniteTooLarge(elements.len()));
        }
        Ok(if elements.is_empty() {
            IndexSet::Empty
        } else {
            IndexSet::Finite(elements)
        })
    }

    pub fn ap(modulus: u64, residue: u64) -> Result<Self, IndexSetError> {
        if modulus == 0 {
            return Err(IndexSetError::ZeroModulus);
        }
        if residue >= modulus {
            return Err(IndexSetError::ResidueOutOfRange { modulus, residue });
        }
        Ok(IndexSet::Ap { modulus, residue })
    }

    pub fn pow(exponent: u32) -> Result<Self, IndexSetError> {
        if exponent < 2 {
            return Err(IndexSetError::ExponentTooSmall(exponent));
        }
        Ok(IndexSet::Pow { exponent })
    }

    /// Complement, with double negations and constants folded.
    pub fn not(self) -> Self {
        match self {
            IndexSet::All => IndexSet::Empty,
            IndexSet::Empty => IndexSet::All,
            IndexSet::Not(inner) => *inner,
            other => IndexSet::Not(Box::new(other)),
        }
    }

    /// Intersection, with identities and absorbing elements folded.
    pub fn and(self, other: Self) -> Self {
        match (self, other) {
            (IndexSet::Empty, _) | (_, IndexSet::Empty) => IndexSet::Empty,
            (IndexSet::All, x) | (x, IndexSet::All) => x,
            (a, b) if a == b => a,
            (a, b) => IndexSet::And(Box::new(a), Box::new(b)),
        }
    }

    /// Union, with identities and absorbing elements folded.
    pub fn or(self, other: Self) -> Self {
        match (self, other) {
            (IndexSet::All, _) | (_, IndexSet::All) => IndexSet::All,
            (IndexSet::Empty, x) | (x, IndexSet::Empty) => x,
            (a, b) if a == b => a,
            (a, b) => IndexSet::Or(Box::new(a), Box::new(b)),
        }
    }

    /// `self ∖ other`.
    pub fn minus(self, other: Self) -> Self {
        self.and(other.not())
    }

    pub fn and_all(sets: impl IntoIterator<Item = IndexSet>) -> Self {
        sets.into_iter().fold(IndexSet::All, IndexSet::and)
    }

    pub fn or_all(sets: impl IntoIterator<Item = IndexSet>) -> Self {
        sets.into_iter().fold(IndexSet::Empty, IndexSet::or)
    }

    pub fn depth(&self) -> usize {
        match self {
            IndexSet::Not(a) => 1 + a.depth(),
            IndexSet::And(a, b) | IndexSet::Or(a, b) => 1 + a.depth().max(b.depth()),
            _ => 1,
        }
    }

    /// Enforces the user-facing depth cap.
    pub fn check_depth(&self) -> Result<(), IndexSetError> {
        let d = self.depth();
        if d > MAX_DEPTH {
            Err(IndexSetError::TooDeep(d))
        } else {
            Ok(())
        }
    }

    /// Exact membership test for `n >= 1`. `contains(0)` is always false.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            IndexSet::All => true,
            IndexSet::Empty => false,
            IndexSet::Finite(v) => v.binary_search(&n).is_ok(),
            IndexSet::Ap { modulus, residue } => n % modulus == *residue,
            IndexSet::Pow { exponent } => iroot::is_perfect_power(n, *exponent),
            IndexSet::Not(a) => !a.contains(n),
            IndexSet::And(a, b) => a.contains(n) && b.contains(n),
            IndexSet::Or(a, b) => a.contains(n) || b.contains(n),
        }
    }

    /// The set with every `FIN` and `POW` leaf replaced by `EMPTY`.
    ///
    /// The result is periodic and differs from `self` only on elements of
    /// the removed leaves.
    pub fn periodic_skeleton(&self) -> IndexSet {
        match self {
            IndexSet::Finite(_) | IndexSet::Pow { .. } => IndexSet::Empty,
            IndexSet::Not(a) => a.periodic_skeleton().not(),
            IndexSet::And(a, b) => a.periodic_skeleton().and(b.periodic_skeleton()),
            IndexSet::Or(a, b) => a.periodic_skeleton().or(b.periodic_skeleton()),
            leaf => leaf.clone(),
        }
    }

    /// Least common multiple of every AP modulus in the tree (1 if none).
    pub fn period(&self) -> u64 {
        fn walk(s: &IndexSet, acc: u64) -> u64 {
            match s {
                IndexSet::Ap { modulus, .. } => num_integer::lcm(acc, *modulus),
                IndexSet::Not(a) => walk(a, acc),
                IndexSet::And(a, b) | IndexSet::Or(a, b) => walk(b, walk(a, acc)),
                _ => acc,
            }
        }
        walk(self, 1)
    }

    /// Distinct `POW` exponents in the tree, sorted.
    pub fn exponents(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.visit_leaves(&mut |leaf| {
            if let IndexSet::Pow { exponent } = leaf {
                out.push(*exponent);
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Union of the elements of every `FIN` leaf, sorted and deduplicated.
    pub fn finite_leaf_elements(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.visit_leaves(&mut |leaf| {
            if let IndexSet::Finite(v) = leaf {
                out.extend_from_slice(v);
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    fn visit_leaves(&self, f: &mut impl FnMut(&IndexSet)) {
        match self {
            IndexSet::Not(a) => a.visit_leaves(f),
            IndexSet::And(a, b) | IndexSet::Or(a, b) => {
                a.visit_leaves(f);
                b.visit_leaves(f);
            }
            leaf => f(leaf),
        }
    }

    /// Iterator over the members in increasing order, starting from `from`.
    pub fn members_from(&self, from: u64) -> impl Iterator<Item = u64> + '_ {
        (from.max(1)..).filter(move |&n| self.contains(n))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::All => write!(f, "ALL"),
            IndexSet::Empty => write!(f, "EMPTY"),
            IndexSet::Finite(v) => {
                let items: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "FIN({})", items.join(","))
            }
            IndexSet::Ap { modulus, residue } => write!(f, "AP({modulus},{residue})"),
            IndexSet::Pow { exponent } => write!(f, "POW({exponent})"),
            IndexSet::Not(a) => write!(f, "NOT({a})"),
            IndexSet::And(a, b) => write!(f, "AND({a},{b})"),
            IndexSet::Or(a, b) => write!(f, "OR({a},{b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let cubes = IndexSet::pow(3).unwrap();
        assert!(cubes.contains(27));
        assert!(!cubes.contains(28));
        assert!(cubes.clone().not().contains(28));
        assert!(IndexSet::ap(2, 0).unwrap().contains(10));
        assert!(!IndexSet::ap(2, 0).unwrap().contains(11));
        let six = IndexSet::ap(2, 0).unwrap().and(IndexSet::ap(3, 0).unwrap());
        assert!(six.contains(12) && !six.contains(9));
        assert!(IndexSet::finite(vec![9, 1, 4]).unwrap().contains(4));
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(IndexSet::ap(0, 0), Err(IndexSetError::ZeroModulus));
        assert_eq!(
            IndexSet::ap(3, 3),
            Err(IndexSetError::ResidueOutOfRange { modulus: 3, residue: 3 })
        );
        assert_eq!(IndexSet::pow(1), Err(IndexSetError::ExponentTooSmall(1)));
        assert_eq!(IndexSet::finite(vec![0, 2]), Err(IndexSetError::NonPositiveElement));
        assert_eq!(IndexSet::finite(vec![]), Ok(IndexSet::Empty));
    }

    #[test]
    fn depth_cap() {
        let mut s = IndexSet::pow(2).unwrap();
        for _ in 0..40 {
            s = IndexSet::Not(Box::new(s));
        }
        assert!(matches!(s.check_depth(), Err(IndexSetError::TooDeep(41))));
    }

    #[test]
    fn smart_constructors_fold_constants() {
        let a = IndexSet::ap(2, 1).unwrap();
        assert_eq!(a.clone().and(IndexSet::All), a);
        assert_eq!(a.clone().or(IndexSet::All), IndexSet::All);
        assert_eq!(a.clone().not().not(), a);
        assert_eq!(IndexSet::Empty.not(), IndexSet::All);
    }

    #[test]
    fn skeleton_drops_sparse_leaves() {
        let s = IndexSet::pow(3).unwrap().not().and(IndexSet::ap(2, 0).unwrap());
        assert_eq!(s.periodic_skeleton(), IndexSet::ap(2, 0).unwrap());
        assert_eq!(s.period(), 2);
        assert_eq!(s.exponents(), vec![3]);
    }

    #[test]
    fn display_uses_spec_syntax() {
        let s = IndexSet::pow(3).unwrap().not().and(IndexSet::finite(vec![4, 1]).unwrap());
        assert_eq!(s.to_string(), "AND(NOT(POW(3)),FIN(1,4))");
    }
}
