//! Deferred pairs `(p, q)` and deferred densities.
//!
//! A pair of affine index rules satisfies the deferred property when
//! `p_n < q_n` for every `n >= 1` and `q_n → ∞`. Its windows are
//! `(p_n, q_n]`, and the deferred density of a set `K` is the limit of the
//! share of each window that `K` occupies.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::index_set::{count_window, CountError, EventualModel, IndexSet};
use crate::rational::{self, Rational};

/// The affine rule `n ↦ slope·n + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexRule {
    pub slope: u64,
    pub offset: u64,
}

impl IndexRule {
    pub const fn new(slope: u64, offset: u64) -> Self {
        Self { slope, offset }
    }

    pub const fn constant(offset: u64) -> Self {
        Self { slope: 0, offset }
    }

    pub fn eval(&self, n: u64) -> u64 {
        self.slope
            .checked_mul(n)
            .and_then(|v| v.checked_add(self.offset))
            .expect("index rule overflowed u64")
    }
}

impl fmt::Display for IndexRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.slope, self.offset) {
            (0, b) => write!(f, "{b}"),
            (1, 0) => write!(f, "n"),
            (a, 0) => write!(f, "{a}n"),
            (1, b) => write!(f, "n+{b}"),
            (a, b) => write!(f, "{a}n+{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid index rule `{0}`: expected forms like 0, n, 2n, 2n+1")]
pub struct RuleParseError(pub String);

impl FromStr for IndexRule {
    type Err = RuleParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || RuleParseError(s.trim().to_string());
        let (linear, offset) = match compact.split_once('+') {
            Some((a, b)) => (a, Some(b)),
            None => (compact.as_str(), None),
        };
        let parse_u64 = |t: &str| t.parse::<u64>().map_err(|_| err());
        let rule = match linear.strip_suffix('n') {
            Some(coeff) => {
                let slope = if coeff.is_empty() { 1 } else { parse_u64(coeff)? };
                let offset = offset.map(parse_u64).transpose()?.unwrap_or(0);
                IndexRule::new(slope, offset)
            }
            None if offset.is_none() => IndexRule::constant(parse_u64(linear)?),
            None => return Err(err()),
        };
        Ok(rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("deferred property violated: p_n < q_n fails at n = {n} (p_n = {p_n}, q_n = {q_n})")]
    NotStrictlyBelow { n: u64, p_n: u64, q_n: u64 },
    #[error("deferred property violated: q_n = {q} does not diverge to infinity")]
    QBounded { q: IndexRule },
    #[error("nesting violated: {condition} fails at n = {n}")]
    NestingViolated { condition: &'static str, n: u64 },
}

/// Smallest `n >= 1` with `slope·n + offset < 0`, if any.
fn first_negative(slope: i128, offset: i128) -> Option<u64> {
    if slope >= 0 {
        (slope + offset < 0).then_some(1)
    } else if offset < 0 {
        Some(1)
    } else {
        // slope·n + offset < 0  ⇔  n > offset / (−slope)
        Some((offset / -slope + 1).max(1) as u64)
    }
}

/// A validated pair of rules with the deferred property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeferredPair {
    p: IndexRule,
    q: IndexRule,
}

impl DeferredPair {
    /// Accepts `(p, q)` iff `p_n < q_n` for all `n >= 1` and `q_n → ∞`.
    pub fn new(p: IndexRule, q: IndexRule) -> Result<Self, PairError> {
        if q.slope == 0 {
            return Err(PairError::QBounded { q });
        }
        let slope = q.slope as i128 - p.slope as i128;
        let offset = q.offset as i128 - p.offset as i128;
        // q_n − p_n ≥ 1 for all n  ⇔  slope·n + offset − 1 ≥ 0 for all n
        if let Some(n) = first_negative(slope, offset - 1) {
            return Err(PairError::NotStrictlyBelow {
                n,
                p_n: p.eval(n),
                q_n: q.eval(n),
            });
        }
        Ok(Self { p, q })
    }

    /// The ordinary Cesàro / natural-density pair `p_n = 0, q_n = n`.
    pub fn natural() -> Self {
        Self {
            p: IndexRule::constant(0),
            q: IndexRule::new(1, 0),
        }
    }

    pub fn p(&self) -> IndexRule {
        self.p
    }

    pub fn q(&self) -> IndexRule {
        self.q
    }

    pub fn is_natural(&self) -> bool {
        *self == Self::natural()
    }

    /// The window `(p_n, q_n]` as `(p_n, q_n)`.
    pub fn window(&self, n: u64) -> (u64, u64) {
        (self.p.eval(n), self.q.eval(n))
    }

    pub fn width(&self, n: u64) -> u64 {
        let (lo, hi) = self.window(n);
        hi - lo
    }

    /// Slope of `q_n − p_n`; zero means constant-width windows.
    pub fn width_slope(&self) -> u64 {
        self.q.slope - self.p.slope
    }

    /// Share of the window at `n` occupied by `set`.
    pub fn partial_density(&self, set: &IndexSet, n: u64, budget: u64) -> Result<Rational, CountError> {
        let (lo, hi) = self.window(n);
        let c = count_window(set, lo, hi, budget)?.count;
        Ok(Rational::new(BigInt::from(c), BigInt::from(hi - lo)))
    }
}

impl fmt::Display for DeferredPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p: {} q: {}", self.p, self.q)
    }
}

/// What is known about `δ_{p,q}(K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityResult {
    /// The limit exists and equals the value.
    Exact(Rational),
    /// Partial density at `at_n`; `oscillation` is the max − min spread over
    /// the last tenth of the evaluation grid (at least three points).
    Estimated {
        value: Rational,
        at_n: u64,
        oscillation: Rational,
    },
    /// The partial densities take two distinct values infinitely often.
    NoLimit {
        n_a: u64,
        value_a: Rational,
        n_b: u64,
        value_b: Rational,
    },
    Inconclusive(String),
}

impl DensityResult {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            DensityResult::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DensityResult::Exact(_) => "exact",
            DensityResult::Estimated { .. } => "estimated",
            DensityResult::NoLimit { .. } => "no_limit",
            DensityResult::Inconclusive(_) => "inconclusive",
        }
    }
}

impl fmt::Display for DensityResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityResult::Exact(v) => write!(f, "exact {}", rational::canonical(v)),
            DensityResult::Estimated {
                value,
                at_n,
                oscillation,
            } => write!(
                f,
                "estimated {} at n = {at_n} (oscillation {})",
                rational::canonical(value),
                rational::canonical(oscillation)
            ),
            DensityResult::NoLimit {
                n_a,
                value_a,
                n_b,
                value_b,
            } => write!(
                f,
                "no limit: partial densities {} (n ≡ {n_a}) and {} (n ≡ {n_b}) both recur",
                rational::canonical(value_a),
                rational::canonical(value_b)
            ),
            DensityResult::Inconclusive(why) => write!(f, "inconclusive: {why}"),
        }
    }
}

/// Geometric evaluation grid `1, 2, 4, ..., <= n_max`, plus `n_max` itself.
pub fn geometric_grid(n_max: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = std::iter::successors(Some(1u64), |&n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect();
    if grid.last() != Some(&n_max) && n_max >= 1 {
        grid.push(n_max);
    }
    grid
}

/// Max − min over the last tenth of `values` (at least three entries).
pub fn tail_oscillation(values: &[Rational]) -> Rational {
    let take = values.len().div_ceil(10).max(3).min(values.len());
    let tail = &values[values.len() - take..];
    match (tail.iter().max(), tail.iter().min()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => Rational::zero(),
    }
}

/// Partial densities on the geometric grid, without any closed form.
pub fn estimate_density(
    set: &IndexSet,
    pair: &DeferredPair,
    n_max: u64,
    budget: u64,
) -> Result<DensityResult, CountError> {
    let grid = geometric_grid(n_max);
    if grid.is_empty() {
        return Ok(DensityResult::Inconclusive("empty evaluation grid".into()));
    }
    let values = grid
        .par_iter()
        .map(|&n| pair.partial_density(set, n, budget))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DensityResult::Estimated {
        value: values.last().cloned().expect("grid is non-empty"),
        at_n: *grid.last().expect("grid is non-empty"),
        oscillation: tail_oscillation(&values),
    })
}

/// `δ_{p,q}(set)`: exact whenever the limit can be decided, otherwise
/// estimated from partial densities up to `n_max`.
pub fn deferred_density(
    set: &IndexSet,
    pair: &DeferredPair,
    n_max: u64,
    budget: u64,
) -> Result<DensityResult, CountError> {
    let model = match EventualModel::analyze(set, budget) {
        Ok(m) => m,
        Err(CountError::BudgetExceeded { .. }) => return estimate_density(set, pair, n_max, budget),
        Err(e) => return Err(e),
    };
    if pair.width_slope() > 0 {
        return Ok(DensityResult::Exact(model.growing_window_density()));
    }
    // Constant width w, window start p_n = a·n + b with a >= 1. The skeleton
    // count depends only on p_n mod L, which is periodic in n.
    let w = pair.width(1);
    let skeleton = set.periodic_skeleton();
    let modulus = model.modulus();
    let cycle = modulus / num_integer::gcd(pair.p().slope, modulus);
    let mut counts = Vec::with_capacity(cycle as usize);
    for n in 1..=cycle {
        let (lo, hi) = pair.window(n);
        counts.push(count_window(&skeleton, lo, hi, budget)?.count);
    }
    let w_big = BigInt::from(w);
    if let Some(j) = counts.iter().position(|&c| c != counts[0]) {
        return Ok(DensityResult::NoLimit {
            n_a: 1,
            value_a: Rational::new(BigInt::from(counts[0]), w_big.clone()),
            n_b: j as u64 + 1,
            value_b: Rational::new(BigInt::from(counts[j]), w_big),
        });
    }
    if model.has_sparse_deviation() {
        return estimate_density(set, pair, n_max, budget);
    }
    Ok(DensityResult::Exact(Rational::new(BigInt::from(counts[0]), w_big)))
}

/// Boundedness of `p_n / (q_n − p_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioBound {
    pub bounded: bool,
    /// `sup_n p_n / (q_n − p_n)` when bounded.
    pub sup: Option<Rational>,
    /// The limit as `n → ∞` when finite.
    pub limit: Option<Rational>,
}

pub fn ratio_bounded(pair: &DeferredPair) -> RatioBound {
    let ratio_at = |n: u64| {
        Rational::new(BigInt::from(pair.p().eval(n)), BigInt::from(pair.width(n)))
    };
    let a = pair.p().slope;
    let wa = pair.width_slope();
    if wa > 0 {
        // A Möbius function of n: monotone, so the sup is at n = 1 or at infinity.
        let limit = Rational::new(BigInt::from(a), BigInt::from(wa));
        let first = ratio_at(1);
        let sup = if first > limit { first } else { limit.clone() };
        RatioBound {
            bounded: true,
            sup: Some(sup),
            limit: Some(limit),
        }
    } else if a == 0 {
        let value = ratio_at(1);
        RatioBound {
            bounded: true,
            sup: Some(value.clone()),
            limit: Some(value),
        }
    } else {
        RatioBound {
            bounded: false,
            sup: None,
            limit: None,
        }
    }
}

/// Size behaviour of a gap set `{k : a_n < k <= b_n}` as `n` grows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapGrowth {
    /// Every gap has exactly this many elements.
    Constant(u64),
    /// The gap size grows linearly (but each gap is finite).
    Growing { slope: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub lower_gap: GapGrowth,
    pub upper_gap: GapGrowth,
    /// `lim (q_n − p_n) / (q'_n − p'_n)`, `None` when it is infinite.
    pub t: Option<Rational>,
}

fn gap(low: IndexRule, high: IndexRule) -> GapGrowth {
    if high.slope == low.slope {
        GapGrowth::Constant(high.offset - low.offset)
    } else {
        GapGrowth::Growing {
            slope: high.slope - low.slope,
        }
    }
}

/// Checks `p_n <= p'_n` and `q'_n <= q_n` for `inner = (p', q')` and
/// `outer = (p, q)`, and reports the gap sizes and the width ratio limit.
pub fn refinement_check(inner: &DeferredPair, outer: &DeferredPair) -> Result<Refinement, PairError> {
    let nested = |low: IndexRule, high: IndexRule, condition: &'static str| {
        let slope = high.slope as i128 - low.slope as i128;
        let offset = high.offset as i128 - low.offset as i128;
        match first_negative(slope, offset) {
            Some(n) => Err(PairError::NestingViolated { condition, n }),
            None => Ok(()),
        }
    };
    nested(outer.p(), inner.p(), "p_n <= p'_n")?;
    nested(inner.q(), outer.q(), "q'_n <= q_n")?;
    let outer_slope = outer.width_slope();
    let inner_slope = inner.width_slope();
    let t = if inner_slope > 0 {
        Some(Rational::new(BigInt::from(outer_slope), BigInt::from(inner_slope)))
    } else if outer_slope == 0 {
        Some(Rational::new(BigInt::from(outer.width(1)), BigInt::from(inner.width(1))))
    } else {
        None
    };
    Ok(Refinement {
        lower_gap: gap(outer.p(), inner.p()),
        upper_gap: gap(inner.q(), outer.q()),
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::{oracle_count, DEFAULT_BUDGET};
    use crate::rational::{int, rat};

    fn pair(p: &str, q: &str) -> Result<DeferredPair, PairError> {
        DeferredPair::new(p.parse().unwrap(), q.parse().unwrap())
    }

    #[test]
    fn rule_syntax_round_trips() {
        for text in ["0", "7", "n", "2n", "n+1", "3n+2"] {
            let r: IndexRule = text.parse().unwrap();
            assert_eq!(r.to_string(), text);
        }
        assert_eq!("2 n + 1".parse::<IndexRule>().unwrap(), IndexRule::new(2, 1));
        assert!("n^2".parse::<IndexRule>().is_err());
        assert!("-n".parse::<IndexRule>().is_err());
        assert!("3+n".parse::<IndexRule>().is_err());
    }

    #[test]
    fn validation() {
        assert!(pair("0", "n").is_ok());
        assert_eq!(
            pair("4n", "2n"),
            Err(PairError::NotStrictlyBelow { n: 1, p_n: 4, q_n: 2 })
        );
        assert_eq!(
            pair("n", "n"),
            Err(PairError::NotStrictlyBelow { n: 1, p_n: 1, q_n: 1 })
        );
        assert!(matches!(pair("0", "5"), Err(PairError::QBounded { .. })));
        // p overtakes q later
        assert_eq!(
            pair("3n", "2n+5"),
            Err(PairError::NotStrictlyBelow { n: 5, p_n: 15, q_n: 15 })
        );
        assert!(pair("n+5", "2n").is_err());
        assert!(pair("2n", "4n").is_ok());
    }

    #[test]
    fn first_negative_is_exact() {
        for slope in -5i128..=5 {
            for offset in -12i128..=12 {
                let brute = (1..200u64).find(|&n| slope * n as i128 + offset < 0);
                assert_eq!(first_negative(slope, offset), brute, "slope {slope} offset {offset}");
            }
        }
    }

    #[test]
    fn densities() {
        let natural = DeferredPair::natural();
        let evens = IndexSet::ap(2, 0).unwrap();
        let cubes = IndexSet::pow(3).unwrap();
        let d = |s: &IndexSet, p: &DeferredPair| deferred_density(s, p, 1000, DEFAULT_BUDGET).unwrap();
        assert_eq!(d(&evens, &natural), DensityResult::Exact(rat(1, 2)));
        assert_eq!(d(&cubes, &natural), DensityResult::Exact(int(0)));
        assert_eq!(d(&IndexSet::All, &pair("2n", "4n").unwrap()), DensityResult::Exact(int(1)));
        assert!(matches!(d(&evens, &pair("n", "n+1").unwrap()), DensityResult::NoLimit { .. }));
        // constant width 2 with period 2: every window holds exactly one even
        assert_eq!(d(&evens, &pair("n", "n+2").unwrap()), DensityResult::Exact(rat(1, 2)));
        // constant width with a sparse deviation is only estimated
        assert!(matches!(
            d(&cubes.clone().not(), &pair("n", "n+2").unwrap()),
            DensityResult::Estimated { .. }
        ));
    }

    #[test]
    fn partial_densities_follow_closed_forms() {
        let cubes = IndexSet::pow(3).unwrap();
        let natural = DeferredPair::natural();
        for n in [10u64, 1000, 100_000] {
            let expected = Rational::new(
                BigInt::from(crate::iroot::iroot(n, 3)),
                BigInt::from(n),
            );
            assert_eq!(natural.partial_density(&cubes, n, DEFAULT_BUDGET).unwrap(), expected);
        }
        let evens = IndexSet::ap(2, 0).unwrap();
        let p = pair("n", "3n+1").unwrap();
        for n in 1..50 {
            let (lo, hi) = p.window(n);
            let c = oracle_count(&evens, lo, hi).unwrap().count;
            assert_eq!(
                p.partial_density(&evens, n, DEFAULT_BUDGET).unwrap(),
                Rational::new(BigInt::from(c), BigInt::from(hi - lo))
            );
        }
    }

    #[test]
    fn ratio_bounds() {
        let b = ratio_bounded(&pair("2n", "4n").unwrap());
        assert!(b.bounded);
        assert_eq!(b.sup, Some(int(1)));
        assert_eq!(ratio_bounded(&DeferredPair::natural()).sup, Some(int(0)));
        assert!(!ratio_bounded(&pair("n", "n+1").unwrap()).bounded);
        // (n+3)/(n+1): decreasing, sup at n = 1
        assert_eq!(ratio_bounded(&pair("n+3", "2n+4").unwrap()).sup, Some(int(2)));
        assert_eq!(ratio_bounded(&pair("3", "n+4").unwrap()).sup, Some(rat(3, 2)));
    }

    #[test]
    fn refinement() {
        let inner = pair("n", "2n").unwrap();
        let outer = pair("0", "3n").unwrap();
        let r = refinement_check(&inner, &outer).unwrap();
        assert_eq!(r.t, Some(int(3)));
        assert_eq!(r.lower_gap, GapGrowth::Growing { slope: 1 });
        let same = refinement_check(&inner, &inner).unwrap();
        assert_eq!(same.t, Some(int(1)));
        assert_eq!(same.lower_gap, GapGrowth::Constant(0));
        assert_eq!(same.upper_gap, GapGrowth::Constant(0));
        assert_eq!(
            refinement_check(&DeferredPair::natural(), &inner),
            Err(PairError::NestingViolated {
                condition: "p_n <= p'_n",
                n: 1
            })
        );
    }
}
