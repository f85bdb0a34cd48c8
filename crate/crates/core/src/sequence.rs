//! Piecewise rule sequences `n ↦ x_n ∈ ℚ^d`.
//!
//! A [`RuleSequence`] is an ordered list of pieces `(guard, terms)`; the
//! value at `n` comes from the first piece whose guard contains `n`, and the
//! last guard is always `ALL`. Because every term is a rational function of
//! `n`, sets such as `{n : x_n ≰ z_n}` or `{n : |x_n − l| ≥ ε}` are exactly
//! expressible in the index-set algebra: a rational function has constant
//! sign beyond the Cauchy bound of its numerator and denominator, and the
//! finitely many indices below it are checked one by one.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::index_set::{CountError, EventualModel, IndexSet, DEFAULT_BUDGET};
use crate::lattice::LatticeVector;
use crate::pair::{self, geometric_grid, DeferredPair, DensityResult};
use crate::poly::{BoundTooLarge, RatFunc};
use crate::rational::{self, Rational};
use crate::term::{Limit, Term};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("a sequence needs at least one piece")]
    NoPieces,
    #[error("piece {piece} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        piece: usize,
        expected: usize,
        found: usize,
    },
    #[error("the last piece must be guarded by ALL so the sequence is total")]
    NotTotal,
    #[error("operation needs a one-dimensional sequence, got dim {0}")]
    NotScalar(usize),
    #[error("sequences have different dimensions ({left} vs {right})")]
    DimensionsDiffer { left: usize, right: usize },
    #[error("set not expressible: {0}")]
    NotExpressible(#[from] BoundTooLarge),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("window of {width} terms exceeds the budget of {budget}")]
    WindowBudget { width: u64, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub guard: IndexSet,
    pub terms: Vec<Term>,
}

impl Piece {
    pub fn new(guard: IndexSet, terms: Vec<Term>) -> Self {
        Self { guard, terms }
    }
}

/// A total, piecewise closed-form sequence in ℚ^d.
#[derive(Debug, Clone)]
pub struct RuleSequence {
    dim: usize,
    pieces: Vec<Piece>,
    /// Exactly the indices served by each piece.
    effective: Vec<IndexSet>,
}

impl PartialEq for RuleSequence {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.pieces == other.pieces
    }
}

impl Eq for RuleSequence {}

impl RuleSequence {
    pub fn new(pieces: Vec<Piece>) -> Result<Self, SequenceError> {
        let first = pieces.first().ok_or(SequenceError::NoPieces)?;
        let dim = first.terms.len();
        for (i, p) in pieces.iter().enumerate() {
            if p.terms.len() != dim || dim == 0 {
                return Err(SequenceError::DimensionMismatch {
                    piece: i,
                    expected: dim.max(1),
                    found: p.terms.len(),
                });
            }
        }
        if pieces.last().map(|p| &p.guard) != Some(&IndexSet::All) {
            return Err(SequenceError::NotTotal);
        }
        let mut effective = Vec::with_capacity(pieces.len());
        let mut taken = IndexSet::Empty;
        for p in &pieces {
            effective.push(p.guard.clone().minus(taken.clone()));
            taken = taken.or(p.guard.clone());
        }
        Ok(Self {
            dim,
            pieces,
            effective,
        })
    }

    /// Builds a sequence from pieces whose guards are pairwise disjoint and
    /// cover every index; the last guard is widened to `ALL`.
    fn from_partition(parts: Vec<(IndexSet, Vec<Term>)>) -> Self {
        assert!(!parts.is_empty(), "partition must be non-empty");
        let dim = parts[0].1.len();
        let last = parts.len() - 1;
        let mut pieces = Vec::with_capacity(parts.len());
        let mut effective = Vec::with_capacity(parts.len());
        for (i, (guard, terms)) in parts.into_iter().enumerate() {
            let g = if i == last { IndexSet::All } else { guard.clone() };
            pieces.push(Piece::new(g, terms));
            effective.push(guard);
        }
        Self {
            dim,
            pieces,
            effective,
        }
    }

    pub fn single(terms: Vec<Term>) -> Result<Self, SequenceError> {
        Self::new(vec![Piece::new(IndexSet::All, terms)])
    }

    pub fn constant(v: &LatticeVector) -> Self {
        Self::single(v.coords().iter().cloned().map(Term::constant).collect())
            .expect("lattice vectors are non-empty")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Indices served by piece `i` (its guard minus all earlier guards).
    pub fn effective_guard(&self, i: usize) -> &IndexSet {
        &self.effective[i]
    }

    pub fn piece_index(&self, n: u64) -> usize {
        self.pieces
            .iter()
            .position(|p| p.guard.contains(n))
            .expect("last guard is ALL")
    }

    pub fn eval(&self, n: u64) -> LatticeVector {
        let piece = &self.pieces[self.piece_index(n)];
        LatticeVector::new(piece.terms.iter().map(|t| t.eval(n)).collect()).expect("dim >= 1")
    }

    pub fn eval_coord(&self, n: u64, c: usize) -> Rational {
        self.pieces[self.piece_index(n)].terms[c].eval(n)
    }

    fn same_dim(&self, other: &Self) -> Result<(), SequenceError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(SequenceError::DimensionsDiffer {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    /// Pieces of `self` and `other` on the common refinement of their partitions.
    fn product_parts<'a>(&'a self, other: &'a Self) -> Vec<(IndexSet, &'a [Term], &'a [Term])> {
        let mut out = Vec::new();
        for (i, a) in self.pieces.iter().enumerate() {
            for (j, b) in other.pieces.iter().enumerate() {
                let g = self.effective[i].clone().and(other.effective[j].clone());
                if !is_provably_empty(&g) {
                    out.push((g, a.terms.as_slice(), b.terms.as_slice()));
                }
            }
        }
        out
    }

    fn map_pieces(&self, f: impl Fn(&[Term]) -> Vec<Term>) -> Self {
        Self::from_partition(
            self.pieces
                .iter()
                .zip(&self.effective)
                .map(|(p, g)| (g.clone(), f(&p.terms)))
                .collect(),
        )
    }

    /// `λ·self + μ·other`.
    pub fn linear(&self, lambda: &Rational, other: &Self, mu: &Rational) -> Result<Self, SequenceError> {
        self.same_dim(other)?;
        Ok(Self::from_partition(
            self.product_parts(other)
                .into_iter()
                .map(|(g, a, b)| {
                    let terms = a
                        .iter()
                        .zip(b)
                        .map(|(x, y)| x.scale(lambda).add(&y.scale(mu)))
                        .collect();
                    (g, terms)
                })
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SequenceError> {
        let one = rational::int(1);
        self.linear(&one, other, &one)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        self.map_pieces(|terms| terms.iter().map(|t| t.scale(k)).collect())
    }

    /// `x_n − v` for a fixed vector.
    pub fn sub_vector(&self, v: &LatticeVector) -> Result<Self, SequenceError> {
        if v.dim() != self.dim {
            return Err(SequenceError::DimensionsDiffer {
                left: self.dim,
                right: v.dim(),
            });
        }
        Ok(self.map_pieces(|terms| {
            terms
                .iter()
                .zip(v.coords())
                .map(|(t, c)| if c.is_zero() { t.clone() } else { t.sub(&Term::constant(c.clone())) })
                .collect()
        }))
    }

    /// Coordinatewise choice between two term vectors, decided per
    /// coordinate by the sign of `selector(a_c, b_c)`: `a_c` where it is
    /// `>= 0`, `b_c` elsewhere.
    fn select(
        &self,
        other: &Self,
        selector: impl Fn(&Term, &Term) -> RatFunc,
        on_ge: impl Fn(&Term, &Term) -> Term,
        on_lt: impl Fn(&Term, &Term) -> Term,
    ) -> Result<Self, SequenceError> {
        self.same_dim(other)?;
        let mut parts: Vec<(IndexSet, Vec<Term>)> = Vec::new();
        for (g, a, b) in self.product_parts(other) {
            let mut current: Vec<(IndexSet, Vec<Term>)> = vec![(g, Vec::with_capacity(self.dim))];
            for c in 0..self.dim {
                let f = selector(&a[c], &b[c]);
                let ge = sign_set(&f, |s| s != Ordering::Less)?;
                let mut next = Vec::with_capacity(current.len() * 2);
                for (guard, terms) in current {
                    let g_ge = guard.clone().and(ge.clone());
                    let g_lt = guard.minus(ge.clone());
                    for (g, t) in [(g_ge, on_ge(&a[c], &b[c])), (g_lt, on_lt(&a[c], &b[c]))] {
                        if !is_provably_empty(&g) {
                            let mut terms = terms.clone();
                            terms.push(t);
                            next.push((g, terms));
                        }
                    }
                }
                current = next;
            }
            parts.extend(current);
        }
        Ok(Self::from_partition(parts))
    }

    /// `x ∨ y`.
    pub fn join(&self, other: &Self) -> Result<Self, SequenceError> {
        self.select(other, |a, b| a.func().sub(b.func()), |a, _| a.clone(), |_, b| b.clone())
    }

    /// `x ∧ y`.
    pub fn meet(&self, other: &Self) -> Result<Self, SequenceError> {
        self.select(other, |a, b| b.func().sub(a.func()), |a, _| a.clone(), |_, b| b.clone())
    }

    fn zero_like(&self) -> Self {
        Self::constant(&LatticeVector::zero(self.dim))
    }

    /// `x⁺ = x ∨ 0`.
    pub fn pos(&self) -> Self {
        self.join(&self.zero_like()).expect("same dim")
    }

    /// `x⁻ = (−x) ∨ 0`.
    pub fn neg_part(&self) -> Self {
        self.scale(&rational::int(-1)).join(&self.zero_like()).expect("same dim")
    }

    /// `|x| = x ∨ (−x)`.
    pub fn abs(&self) -> Self {
        self.select(self, |a, _| a.func().clone(), |a, _| a.clone(), |a, _| a.neg())
            .expect("same dim")
    }

    /// `{n : self_n ≰ other_n}` in the coordinatewise order.
    pub fn not_le_set(&self, other: &Self) -> Result<IndexSet, SequenceError> {
        self.same_dim(other)?;
        let mut out = IndexSet::Empty;
        for (g, a, b) in self.product_parts(other) {
            let mut fails = IndexSet::Empty;
            for (lhs, rhs) in a.iter().zip(b) {
                fails = fails.or(sign_set(&rhs.func().sub(lhs.func()), |s| s == Ordering::Less)?);
            }
            out = out.or(g.and(fails));
        }
        Ok(out)
    }

    /// `{n : self_n ≠ other_n}`.
    pub fn disagreement_set(&self, other: &Self) -> Result<IndexSet, SequenceError> {
        self.same_dim(other)?;
        let mut out = IndexSet::Empty;
        for (g, a, b) in self.product_parts(other) {
            let mut differs = IndexSet::Empty;
            for (x, y) in a.iter().zip(b) {
                differs = differs.or(sign_set(&x.func().sub(y.func()), |s| s != Ordering::Equal)?);
            }
            out = out.or(g.and(differs));
        }
        Ok(out)
    }

    /// `{n : |x_n − limit| ≰ z_n}`, the indices where domination fails.
    pub fn domination_violations(&self, limit: &LatticeVector, z: &Self) -> Result<IndexSet, SequenceError> {
        let centered = self.sub_vector(limit)?;
        let upper = centered.not_le_set(z)?;
        let lower = centered.scale(&rational::int(-1)).not_le_set(z)?;
        Ok(upper.or(lower))
    }
}

impl fmt::Display for RuleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let terms: Vec<String> = p.terms.iter().map(Term::to_string).collect();
            write!(f, "({})", terms.join(", "))?;
            if p.guard != IndexSet::All {
                write!(f, " if {}", p.guard)?;
            }
        }
        Ok(())
    }
}

/// Whether the set is empty, decided exactly when affordable.
pub fn is_provably_empty(set: &IndexSet) -> bool {
    if *set == IndexSet::Empty {
        return true;
    }
    match EventualModel::analyze(set, DEFAULT_BUDGET) {
        Ok(model) => model.finite_members().is_some_and(|m| m.is_empty()),
        Err(_) => false,
    }
}

/// `{n >= 1 : keep(sign(f(n)))}` as an algebra set.
pub fn sign_set(f: &RatFunc, keep: impl Fn(Ordering) -> bool) -> Result<IndexSet, BoundTooLarge> {
    if f.is_zero() {
        return Ok(if keep(Ordering::Equal) { IndexSet::All } else { IndexSet::Empty });
    }
    let (bound, sign) = f.eventual_sign()?;
    let eventually = keep(sign);
    let exceptions: Vec<u64> = (1..=bound).filter(|&n| keep(f.sign_at(n)) != eventually).collect();
    let listed = IndexSet::finite(exceptions).expect("at most SCAN_CAP positive elements");
    Ok(if eventually { listed.not() } else { listed })
}

fn require_scalar(x: &RuleSequence) -> Result<(), SequenceError> {
    if x.dim() == 1 {
        Ok(())
    } else {
        Err(SequenceError::NotScalar(x.dim()))
    }
}

fn window_sum(x: &RuleSequence, lo: u64, hi: u64, map: impl Fn(Rational) -> Rational + Sync) -> Rational {
    const CHUNK: u64 = 4096;
    let starts: Vec<u64> = (lo + 1..=hi).step_by(CHUNK as usize).collect();
    starts
        .par_iter()
        .map(|&s| {
            (s..=(s + CHUNK - 1).min(hi)).fold(Rational::zero(), |acc, k| acc + map(x.eval_coord(k, 0)))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Rational::zero(), |acc, part| acc + part)
}

/// `(D_{p,q} x)_n = (1 / (q_n − p_n)) Σ_{k = p_n + 1}^{q_n} x_k`, exactly.
pub fn deferred_cesaro(x: &RuleSequence, pair: &DeferredPair, n: u64, budget: u64) -> Result<Rational, SequenceError> {
    require_scalar(x)?;
    let (lo, hi) = pair.window(n);
    if hi - lo > budget {
        return Err(SequenceError::WindowBudget { width: hi - lo, budget });
    }
    Ok(window_sum(x, lo, hi, |v| v) / rational::from_u64(hi - lo))
}

/// The ordinary Cesàro mean `(1/n) Σ_{k <= n} x_k`.
pub fn cesaro_mean(x: &RuleSequence, n: u64) -> Result<Rational, SequenceError> {
    require_scalar(x)?;
    let mut sum = Rational::zero();
    for k in 1..=n {
        sum += x.eval_coord(k, 0);
    }
    Ok(sum / rational::from_u64(n))
}

/// Result of an empirical convergence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalReport {
    pub verdict: Verdict,
    /// `(n, value)` on the evaluation grid.
    pub trace: Vec<(u64, Rational)>,
    /// A proven asymptotic lower bound on the quantity, when one exists.
    pub lower_bound: Option<LowerBound>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerBound {
    Finite(Rational),
    Infinite,
}

/// `liminf` lower bound for the deferred mean of `|x_k − l|`: each piece
/// contributes its density times the distance of its limit from `l`.
fn strong_lower_bound(
    x: &RuleSequence,
    l: &Rational,
    pair: &DeferredPair,
    n_max: u64,
    budget: u64,
) -> Result<Option<LowerBound>, SequenceError> {
    let mut total = Rational::zero();
    for (i, piece) in x.pieces().iter().enumerate() {
        let density = pair::deferred_density(x.effective_guard(i), pair, n_max, budget)?;
        let Some(d) = density.exact() else {
            return Ok(None);
        };
        if d.is_zero() {
            continue;
        }
        match piece.terms[0].tail_class().limit {
            Limit::Finite(v) => total += d * (v - l).abs(),
            Limit::PosInfinity | Limit::NegInfinity => return Ok(Some(LowerBound::Infinite)),
            Limit::Unknown => return Ok(None),
        }
    }
    Ok(Some(LowerBound::Finite(total)))
}

/// Strong `D_{p,q}` convergence of a scalar sequence to `l`:
/// `(1/(q_n − p_n)) Σ |x_k − l| → 0`.
pub fn strong_dpq_check(
    x: &RuleSequence,
    l: &Rational,
    pair: &DeferredPair,
    n_max: u64,
    tol: &Rational,
    budget: u64,
) -> Result<EmpiricalReport, SequenceError> {
    require_scalar(x)?;
    let mut trace = Vec::new();
    for n in geometric_grid(n_max) {
        let (lo, hi) = pair.window(n);
        if hi - lo > budget {
            return Err(SequenceError::WindowBudget { width: hi - lo, budget });
        }
        let mean = window_sum(x, lo, hi, |v| (v - l).abs()) / rational::from_u64(hi - lo);
        trace.push((n, mean));
    }
    let lower_bound = if pair.width_slope() > 0 {
        strong_lower_bound(x, l, pair, n_max, budget)?
    } else {
        None
    };
    let refuted = match &lower_bound {
        Some(LowerBound::Infinite) => true,
        Some(LowerBound::Finite(b)) => b > tol,
        None => false,
    };
    let verdict = if refuted {
        Verdict::Refuted
    } else {
        let last_three: Vec<&Rational> = trace.iter().rev().take(3).map(|(_, v)| v).collect();
        let settling = last_three.windows(2).all(|w| w[0] <= w[1]);
        if trace.last().is_some_and(|(_, v)| v < tol) && settling {
            Verdict::Consistent
        } else {
            Verdict::Inconclusive
        }
    };
    Ok(EmpiricalReport {
        verdict,
        trace,
        lower_bound,
    })
}

/// Report of a deferred statistical convergence check for a real sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealStatReport {
    pub verdict: Verdict,
    /// `{k : |x_k − l| >= ε}` when expressible in the algebra.
    pub exceedance_set: Option<IndexSet>,
    pub density: DensityResult,
}

/// `{k : |x_k − l| >= ε}` for a scalar sequence.
pub fn exceedance_set(x: &RuleSequence, l: &Rational, eps: &Rational) -> Result<IndexSet, SequenceError> {
    require_scalar(x)?;
    let mut out = IndexSet::Empty;
    for (i, piece) in x.pieces().iter().enumerate() {
        let f = piece.terms[0].func().sub(&RatFunc::constant(l.clone()));
        let eps_f = RatFunc::constant(eps.clone());
        let above = sign_set(&f.sub(&eps_f), |s| s != Ordering::Less)?;
        let below = sign_set(&f.neg().sub(&eps_f), |s| s != Ordering::Less)?;
        out = out.or(x.effective_guard(i).clone().and(above.or(below)));
    }
    Ok(out)
}

/// Deferred statistical convergence of a scalar sequence to `l` at tolerance `ε`.
pub fn deferred_stat_check_real(
    x: &RuleSequence,
    l: &Rational,
    eps: &Rational,
    pair: &DeferredPair,
    n_max: u64,
    budget: u64,
) -> Result<RealStatReport, SequenceError> {
    require_scalar(x)?;
    match exceedance_set(x, l, eps) {
        Ok(set) => {
            let density = pair::deferred_density(&set, pair, n_max, budget)?;
            let verdict = match &density {
                DensityResult::Exact(d) if d.is_zero() => Verdict::Verified,
                DensityResult::Exact(_) | DensityResult::NoLimit { .. } => Verdict::Refuted,
                _ => Verdict::Inconclusive,
            };
            Ok(RealStatReport {
                verdict,
                exceedance_set: Some(set),
                density,
            })
        }
        Err(SequenceError::NotExpressible(_)) => {
            let grid = geometric_grid(n_max);
            let mut values = Vec::with_capacity(grid.len());
            for &n in &grid {
                let (lo, hi) = pair.window(n);
                if hi - lo > budget {
                    return Err(SequenceError::WindowBudget { width: hi - lo, budget });
                }
                let hits = (lo + 1..=hi).filter(|&k| (x.eval_coord(k, 0) - l).abs() >= *eps).count();
                values.push(Rational::new(BigInt::from(hits), BigInt::from(hi - lo)));
            }
            let density = DensityResult::Estimated {
                value: values.last().cloned().unwrap_or_else(Rational::zero),
                at_n: grid.last().copied().unwrap_or(0),
                oscillation: pair::tail_oscillation(&values),
            };
            Ok(RealStatReport {
                verdict: Verdict::Inconclusive,
                exceedance_set: None,
                density,
            })
        }
        Err(e) => Err(e),
    }
}

/// Indicator sequence of a set: `1` on the set, `0` elsewhere.
pub fn indicator(set: &IndexSet) -> RuleSequence {
    RuleSequence::new(vec![
        Piece::new(set.clone(), vec![crate::term::int_term(1)]),
        Piece::new(IndexSet::All, vec![Term::zero()]),
    ])
    .expect("two scalar pieces, last guarded by ALL")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn term(s: &str) -> Term {
        Term::parse(s).unwrap()
    }

    fn cube_z() -> RuleSequence {
        RuleSequence::new(vec![
            Piece::new(IndexSet::pow(3).unwrap(), vec![term("0"), term("n^2")]),
            Piece::new(IndexSet::All, vec![term("0"), term("1/n^2")]),
        ])
        .unwrap()
    }

    fn scalar(s: &str) -> RuleSequence {
        RuleSequence::single(vec![term(s)]).unwrap()
    }

    #[test]
    fn evaluation_uses_first_matching_piece() {
        let z = cube_z();
        assert_eq!(z.eval(8), LatticeVector::from_ints(&[0, 64]).unwrap());
        assert_eq!(z.eval(10), LatticeVector::from_ratios(&[(0, 1), (1, 100)]).unwrap());
        let c = LatticeVector::from_ratios(&[(3, 2), (-1, 1)]).unwrap();
        assert_eq!(RuleSequence::constant(&c).eval(12345), c);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(RuleSequence::new(vec![]), Err(SequenceError::NoPieces));
        assert_eq!(
            RuleSequence::new(vec![Piece::new(IndexSet::pow(2).unwrap(), vec![term("1")])]),
            Err(SequenceError::NotTotal)
        );
        assert!(matches!(
            RuleSequence::new(vec![
                Piece::new(IndexSet::pow(2).unwrap(), vec![term("1")]),
                Piece::new(IndexSet::All, vec![term("1"), term("2")]),
            ]),
            Err(SequenceError::DimensionMismatch { piece: 1, .. })
        ));
    }

    #[test]
    fn cesaro_means() {
        let natural = DeferredPair::natural();
        let ones = scalar("1");
        let ident = scalar("n");
        assert_eq!(deferred_cesaro(&ones, &natural, 17, DEFAULT_BUDGET).unwrap(), int(1));
        assert_eq!(deferred_cesaro(&ident, &natural, 9, DEFAULT_BUDGET).unwrap(), int(5));
        let shifted = DeferredPair::new("n".parse().unwrap(), "2n".parse().unwrap()).unwrap();
        assert_eq!(deferred_cesaro(&ident, &shifted, 10, DEFAULT_BUDGET).unwrap(), rat(31, 2));
        assert_eq!(cesaro_mean(&ident, 9).unwrap(), int(5));
        assert!(matches!(
            deferred_cesaro(&cube_z(), &natural, 3, DEFAULT_BUDGET),
            Err(SequenceError::NotScalar(2))
        ));
    }

    #[test]
    fn lattice_operations_on_sequences() {
        let x = scalar("n - 5");
        let y = scalar("2");
        let j = x.join(&y).unwrap();
        let m = x.meet(&y).unwrap();
        for n in 1..30 {
            let (a, b) = (x.eval(n), y.eval(n));
            assert_eq!(j.eval(n), a.join(&b).unwrap());
            assert_eq!(m.eval(n), a.meet(&b).unwrap());
            assert_eq!(x.abs().eval(n), a.abs());
            assert_eq!(x.pos().eval(n), a.pos());
            assert_eq!(x.neg_part().eval(n), a.neg_part());
        }
    }

    #[test]
    fn sign_sets_are_exact() {
        let f = term("(n-3)(n-7)").func().clone();
        let neg = sign_set(&f, |s| s == Ordering::Less).unwrap();
        for n in 1..100 {
            assert_eq!(neg.contains(n), n > 3 && n < 7, "n = {n}");
        }
        let nonneg = sign_set(&f, |s| s != Ordering::Less).unwrap();
        assert!(matches!(nonneg, IndexSet::Not(_)));
    }

    #[test]
    fn domination_violations() {
        let x = scalar("1/n");
        let z = scalar("2/n");
        let zero = LatticeVector::zero(1);
        assert!(is_provably_empty(&x.domination_violations(&zero, &z).unwrap()));
        let big = scalar("3/n");
        let v = big.domination_violations(&zero, &z).unwrap();
        assert!(v.contains(1) && v.contains(1000));
    }

    #[test]
    fn strong_convergence() {
        let natural = DeferredPair::natural();
        let r = strong_dpq_check(&scalar("1/n"), &int(0), &natural, 1024, &rat(1, 50), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        let r = strong_dpq_check(&scalar("7/3"), &rat(7, 3), &natural, 256, &rat(1, 1000), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert!(r.trace.iter().all(|(_, v)| v.is_zero()));
        let r = strong_dpq_check(&scalar("1"), &int(0), &natural, 256, &rat(1, 10), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        assert_eq!(r.lower_bound, Some(LowerBound::Finite(int(1))));
    }

    #[test]
    fn statistical_convergence_of_indicators() {
        let natural = DeferredPair::natural();
        let squares = indicator(&IndexSet::pow(2).unwrap());
        let r = deferred_stat_check_real(&squares, &int(0), &rat(1, 2), &natural, 1000, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.density, DensityResult::Exact(int(0)));
        let evens = indicator(&IndexSet::ap(2, 0).unwrap());
        let r = deferred_stat_check_real(&evens, &int(0), &rat(1, 2), &natural, 1000, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        assert_eq!(r.density, DensityResult::Exact(rat(1, 2)));
        let c = scalar("4/3");
        let r = deferred_stat_check_real(&c, &rat(4, 3), &rat(1, 100), &natural, 1000, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(is_provably_empty(r.exceedance_set.as_ref().unwrap()));
    }
}
