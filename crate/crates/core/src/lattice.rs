//! The Riesz space ℚ^d under the coordinatewise order.
//!
//! Vectors are fixed-length tuples of exact rationals. Join and meet are the
//! coordinatewise maximum and minimum, so they exist for every pair of
//! vectors, comparable or not. Operations between vectors of different
//! dimension are rejected rather than broadcast.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: left has dim {left}, right has dim {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("a lattice vector needs at least one coordinate")]
    EmptyVector,
    #[error("ideal support index {index} is outside 1..={dim}")]
    SupportOutOfRange { index: usize, dim: usize },
}

/// A vector of ℚ^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    coords: Vec<Rational>,
}

/// Outcome of comparing two vectors in the partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderRelation {
    Equal,
    Less,
    Greater,
    Incomparable,
}

/// Positive part, negative part and modulus of a vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parts {
    pub pos: LatticeVector,
    pub neg: LatticeVector,
    pub abs: LatticeVector,
}

impl LatticeVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self, LatticeError> {
        if coords.is_empty() {
            return Err(LatticeError::EmptyVector);
        }
        Ok(Self { coords })
    }

    /// Convenience constructor from integer pairs `(num, den)`.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Result<Self, LatticeError> {
        Self::new(pairs.iter().map(|&(n, d)| rational::rat(n, d)).collect())
    }

    pub fn from_ints(values: &[i64]) -> Result<Self, LatticeError> {
        Self::new(values.iter().map(|&v| rational::int(v)).collect())
    }

    /// The zero vector of dimension `dim` (`dim >= 1`).
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "zero vector needs dim >= 1");
        Self {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    /// Coordinate `i`, zero-based.
    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn same_dim(&self, other: &Self) -> Result<(), LatticeError> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self, LatticeError> {
        self.same_dim(other)?;
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self {
            coords: self.coords.iter().map(f).collect(),
        }
    }

    /// `x ∨ y`, the coordinatewise maximum.
    pub fn join(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, |a, b| if a >= b { a.clone() } else { b.clone() })
    }

    /// `x ∧ y`, the coordinatewise minimum.
    pub fn meet(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, |a, b| if a <= b { a.clone() } else { b.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        self.map(|a| a * factor)
    }

    /// `x⁺ = x ∨ 0`.
    pub fn pos(&self) -> Self {
        self.map(|a| if a.is_positive() { a.clone() } else { Rational::zero() })
    }

    /// `x⁻ = (−x) ∨ 0`.
    pub fn neg_part(&self) -> Self {
        self.map(|a| if a.is_negative() { -a } else { Rational::zero() })
    }

    /// `|x| = x ∨ (−x)`.
    pub fn abs(&self) -> Self {
        self.map(|a| a.abs())
    }

    pub fn parts(&self) -> Parts {
        Parts {
            pos: self.pos(),
            neg: self.neg_part(),
            abs: self.abs(),
        }
    }

    /// `self ≤ other` in the coordinatewise order.
    pub fn le(&self, other: &Self) -> Result<bool, LatticeError> {
        self.same_dim(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b))
    }

    /// Zero-based index of the first coordinate where `self ≤ other` fails.
    pub fn first_exceeding(&self, other: &Self) -> Result<Option<usize>, LatticeError> {
        self.same_dim(other)?;
        Ok(self.coords.iter().zip(&other.coords).position(|(a, b)| a > b))
    }

    pub fn compare(&self, other: &Self) -> Result<OrderRelation, LatticeError> {
        let le = self.le(other)?;
        let ge = other.le(self)?;
        Ok(match (le, ge) {
            (true, true) => OrderRelation::Equal,
            (true, false) => OrderRelation::Less,
            (false, true) => OrderRelation::Greater,
            (false, false) => OrderRelation::Incomparable,
        })
    }

    /// Canonical rendering, e.g. `(0/1, 1/2)`.
    pub fn canonical(&self) -> String {
        let inner: Vec<String> = self.coords.iter().map(rational::canonical).collect();
        format!("({})", inner.join(", "))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.coords.iter().map(rational::compact).collect();
        write!(f, "({})", inner.join(", "))
    }
}

/// A coordinate ideal `{x : x_i = 0 for every i outside the support}`.
///
/// Support indices are one-based, matching how coordinates are numbered in
/// reports and spec files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderIdeal {
    support: BTreeSet<usize>,
}

impl OrderIdeal {
    pub fn new(support: impl IntoIterator<Item = usize>) -> Self {
        Self {
            support: support.into_iter().collect(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Self::new(1..=dim)
    }

    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    /// Fails if any support index falls outside `1..=dim`.
    pub fn validate(&self, dim: usize) -> Result<(), LatticeError> {
        match self.support.iter().find(|&&i| i == 0 || i > dim) {
            Some(&index) => Err(LatticeError::SupportOutOfRange { index, dim }),
            None => Ok(()),
        }
    }

    /// Whether coordinate `i` (one-based) lies in the support.
    pub fn allows(&self, i: usize) -> bool {
        self.support.contains(&i)
    }

    pub fn contains(&self, x: &LatticeVector) -> Result<bool, LatticeError> {
        self.validate(x.dim())?;
        Ok(x
            .coords()
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.allows(i + 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(values: &[i64]) -> LatticeVector {
        LatticeVector::from_ints(values).unwrap()
    }

    #[test]
    fn join_and_meet_are_coordinatewise() {
        assert_eq!(v(&[1, 5]).join(&v(&[3, 2])).unwrap(), v(&[3, 5]));
        assert_eq!(v(&[1, 5]).meet(&v(&[3, 2])).unwrap(), v(&[1, 2]));
        assert_eq!(v(&[0, 0]).meet(&v(&[-1, 1])).unwrap(), v(&[-1, 0]));
        let x = v(&[4, -2, 7]);
        assert_eq!(x.join(&x).unwrap(), x);
        assert_eq!(x.meet(&x).unwrap(), x);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let err = v(&[1, 2]).join(&v(&[1, 2, 3])).unwrap_err();
        assert_eq!(err, LatticeError::DimensionMismatch { left: 2, right: 3 });
        assert!(v(&[1]).compare(&v(&[1, 1])).is_err());
        assert_eq!(LatticeVector::new(vec![]), Err(LatticeError::EmptyVector));
    }

    #[test]
    fn parts_split_signs() {
        let p = v(&[-2, 3]).parts();
        assert_eq!(p.pos, v(&[0, 3]));
        assert_eq!(p.neg, v(&[2, 0]));
        assert_eq!(p.abs, v(&[2, 3]));
        let z = LatticeVector::zero(3).parts();
        assert!(z.pos.is_zero() && z.neg.is_zero() && z.abs.is_zero());
    }

    #[test]
    fn compare_gives_partial_order_verdicts() {
        assert_eq!(v(&[1, 2]).compare(&v(&[2, 1])).unwrap(), OrderRelation::Incomparable);
        assert_eq!(v(&[1, 1]).compare(&v(&[1, 2])).unwrap(), OrderRelation::Less);
        assert_eq!(v(&[1, 2]).compare(&v(&[1, 1])).unwrap(), OrderRelation::Greater);
        assert_eq!(v(&[3, 3]).compare(&v(&[3, 3])).unwrap(), OrderRelation::Equal);
    }

    #[test]
    fn ideal_membership() {
        let a = OrderIdeal::new([2]);
        assert!(a.contains(&v(&[0, 5])).unwrap());
        assert!(!a.contains(&v(&[1, 5])).unwrap());
        assert_eq!(
            OrderIdeal::new([3]).contains(&v(&[0, 1])),
            Err(LatticeError::SupportOutOfRange { index: 3, dim: 2 })
        );
        assert!(OrderIdeal::full(2).contains(&v(&[9, -9])).unwrap());
    }
}
