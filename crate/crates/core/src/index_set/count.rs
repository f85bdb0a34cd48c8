//! Exact counting of `|{k : lo < k <= hi, k ∈ K}|`.
//!
//! A set `K` agrees with its periodic skeleton `P` (every `FIN`/`POW` leaf
//! replaced by `EMPTY`) except on elements of those sparse leaves, so
//!
//! ```text
//! count(K) = count(P) + Σ_{k ∈ sparse leaves ∩ window} ([k ∈ K] − [k ∈ P])
//! ```
//!
//! `count(P)` is a closed form for single progressions and a per-period
//! table otherwise. The sparse correction enumerates the (few) cubes,
//! squares or listed elements inside the window.

use thiserror::Error;

use super::IndexSet;
use crate::iroot;

/// Default number of membership evaluations a single count may spend.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowCount {
    pub lo: u64,
    pub hi: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("window ({lo}, {hi}] is empty or inverted")]
    InvalidWindow { lo: u64, hi: u64 },
    #[error("counting exceeded the budget of {budget} membership evaluations")]
    BudgetExceeded { budget: u64 },
    #[error("window of width {width} exceeds the oracle limit of {limit}")]
    WindowTooLarge { width: u64, limit: u64 },
}

/// Largest window the brute-force oracle accepts.
pub const ORACLE_LIMIT: u64 = 10_000_000;

pub(crate) struct Meter {
    used: u64,
    budget: u64,
}

impl Meter {
    pub(crate) fn new(budget: u64) -> Self {
        Self { used: 0, budget }
    }

    pub(crate) fn charge(&mut self, amount: u64) -> Result<(), CountError> {
        self.used = self.used.saturating_add(amount);
        if self.used > self.budget {
            Err(CountError::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }
}

fn check_window(lo: u64, hi: u64) -> Result<(), CountError> {
    if lo < hi {
        Ok(())
    } else {
        Err(CountError::InvalidWindow { lo, hi })
    }
}

/// `|{1 <= k <= m : k ≡ residue (mod modulus)}|`.
///
/// The least member is `r' = residue` when `residue >= 1`, else `modulus`;
/// the count is `floor((m − r') / c) + 1` for `m >= r'`, which equals
/// `floor((m + c − r') / c)` for every `m >= 0`.
fn ap_prefix(m: u64, modulus: u64, residue: u64) -> u64 {
    let least = if residue == 0 { modulus } else { residue };
    (m as u128 + modulus as u128 - least as u128) as u64 / modulus
}

/// `|{1 <= k <= m : k ∈ P}|` where `P` has no sparse leaves, if a closed form applies.
fn periodic_prefix_closed(p: &IndexSet, m: u64) -> Option<u64> {
    match p {
        IndexSet::All => Some(m),
        IndexSet::Empty => Some(0),
        IndexSet::Ap { modulus, residue } => Some(ap_prefix(m, *modulus, *residue)),
        IndexSet::Not(inner) => periodic_prefix_closed(inner, m).map(|c| m - c),
        _ => None,
    }
}

/// Per-period membership table for a periodic set.
struct PeriodTable {
    period: u64,
    /// `prefix[r] = |{1 <= k <= r : k ∈ P}|` for `r` in `0..=period`.
    prefix: Vec<u64>,
}

impl PeriodTable {
    fn build(p: &IndexSet, meter: &mut Meter) -> Result<Self, CountError> {
        let period = p.period();
        meter.charge(period)?;
        let mut prefix = Vec::with_capacity(period as usize + 1);
        prefix.push(0);
        let mut acc = 0;
        for k in 1..=period {
            if p.contains(k) {
                acc += 1;
            }
            prefix.push(acc);
        }
        Ok(Self { period, prefix })
    }

    fn prefix_count(&self, m: u64) -> u64 {
        let full = m / self.period;
        full * self.prefix[self.period as usize] + self.prefix[(m % self.period) as usize]
    }
}

fn periodic_count(p: &IndexSet, lo: u64, hi: u64, meter: &mut Meter) -> Result<u64, CountError> {
    if let (Some(a), Some(b)) = (periodic_prefix_closed(p, lo), periodic_prefix_closed(p, hi)) {
        return Ok(b - a);
    }
    let table = PeriodTable::build(p, meter)?;
    Ok(table.prefix_count(hi) - table.prefix_count(lo))
}

/// Elements of the `FIN`/`POW` leaves of `set` that fall in `(lo, hi]`.
pub(crate) fn sparse_candidates(
    set: &IndexSet,
    lo: u64,
    hi: u64,
    meter: &mut Meter,
) -> Result<Vec<u64>, CountError> {
    let mut out = Vec::new();
    for k in set.finite_leaf_elements() {
        if k > lo && k <= hi {
            out.push(k);
        }
    }
    for e in set.exponents() {
        let first = iroot::iroot(lo, e) + 1;
        let last = iroot::iroot(hi, e);
        if last >= first {
            meter.charge(last - first + 1)?;
            for j in first..=last {
                out.push(iroot::checked_pow(j, e).expect("j^e <= hi") as u64);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Exact count of members of `set` in `(lo, hi]`.
pub fn count_window(set: &IndexSet, lo: u64, hi: u64, budget: u64) -> Result<WindowCount, CountError> {
    check_window(lo, hi)?;
    let mut meter = Meter::new(budget);
    let count = count_with(set, lo, hi, &mut meter)?;
    Ok(WindowCount { lo, hi, count })
}

pub(crate) fn count_with(set: &IndexSet, lo: u64, hi: u64, meter: &mut Meter) -> Result<u64, CountError> {
    match set {
        IndexSet::Finite(v) => {
            let a = v.partition_point(|&k| k <= lo);
            let b = v.partition_point(|&k| k <= hi);
            return Ok((b - a) as u64);
        }
        IndexSet::Pow { exponent } => {
            return Ok(iroot::iroot(hi, *exponent) - iroot::iroot(lo, *exponent));
        }
        IndexSet::Not(inner) if matches!(**inner, IndexSet::Finite(_) | IndexSet::Pow { .. }) => {
            return Ok(hi - lo - count_with(inner, lo, hi, meter)?);
        }
        _ => {}
    }
    let skeleton = set.periodic_skeleton();
    let base = periodic_count(&skeleton, lo, hi, meter)?;
    let candidates = sparse_candidates(set, lo, hi, meter)?;
    meter.charge(2 * candidates.len() as u64)?;
    let mut added: u64 = 0;
    let mut removed: u64 = 0;
    for k in candidates {
        match (set.contains(k), skeleton.contains(k)) {
            (true, false) => added += 1,
            (false, true) => removed += 1,
            _ => {}
        }
    }
    Ok(base + added - removed)
}

/// Brute-force reference count: tests every integer in the window.
pub fn oracle_count(set: &IndexSet, lo: u64, hi: u64) -> Result<WindowCount, CountError> {
    check_window(lo, hi)?;
    let width = hi - lo;
    if width > ORACLE_LIMIT {
        return Err(CountError::WindowTooLarge {
            width,
            limit: ORACLE_LIMIT,
        });
    }
    let count = ((lo + 1)..=hi).filter(|&k| set.contains(k)).count() as u64;
    Ok(WindowCount { lo, hi, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(set: &IndexSet, lo: u64, hi: u64) -> u64 {
        count_window(set, lo, hi, DEFAULT_BUDGET).unwrap().count
    }

    #[test]
    fn ap_prefix_matches_enumeration() {
        for c in 1..12u64 {
            for r in 0..c {
                for m in 0..80u64 {
                    let brute = (1..=m).filter(|k| k % c == r).count() as u64;
                    assert_eq!(ap_prefix(m, c, r), brute, "c={c} r={r} m={m}");
                }
            }
        }
    }

    #[test]
    fn named_examples() {
        let evens = IndexSet::ap(2, 0).unwrap();
        let cubes = IndexSet::pow(3).unwrap();
        assert_eq!(count(&evens, 0, 10), 5);
        assert_eq!(count(&cubes, 0, 1000), 10);
        assert_eq!(count(&cubes.clone().not(), 0, 27), 24);
        assert_eq!(oracle_count(&IndexSet::All, 0, 100).unwrap().count, 100);
        assert_eq!(oracle_count(&IndexSet::Empty, 0, 100).unwrap().count, 0);
        let sixes = evens.and(IndexSet::ap(3, 0).unwrap());
        assert_eq!(oracle_count(&sixes, 0, 60).unwrap().count, 10);
        assert_eq!(count(&sixes, 0, 60), 10);
    }

    #[test]
    fn window_errors() {
        assert_eq!(
            count_window(&IndexSet::All, 5, 5, 10),
            Err(CountError::InvalidWindow { lo: 5, hi: 5 })
        );
        assert!(matches!(
            oracle_count(&IndexSet::All, 0, ORACLE_LIMIT + 1),
            Err(CountError::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn budget_is_reported_not_ignored() {
        let big_period = IndexSet::ap(1_000_003, 5)
            .unwrap()
            .or(IndexSet::ap(999_983, 1).unwrap());
        assert_eq!(
            count_window(&big_period, 0, 10, 1000),
            Err(CountError::BudgetExceeded { budget: 1000 })
        );
        assert!(count_window(&big_period, 0, 10, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn mixed_sets_match_oracle() {
        let sets = [
            IndexSet::pow(2).unwrap().and(IndexSet::ap(2, 0).unwrap()),
            IndexSet::pow(3).unwrap().not().or(IndexSet::ap(5, 2).unwrap()),
            IndexSet::ap(4, 1)
                .unwrap()
                .and(IndexSet::finite(vec![1, 5, 6, 9, 13]).unwrap().not())
                .or(IndexSet::pow(2).unwrap()),
            IndexSet::ap(6, 1).unwrap().not().and(IndexSet::ap(4, 3).unwrap().not()),
        ];
        for s in &sets {
            for (lo, hi) in [(0, 1), (0, 100), (17, 1234), (999, 5000)] {
                assert_eq!(count(s, lo, hi), oracle_count(s, lo, hi).unwrap().count, "{s} ({lo},{hi}]");
            }
        }
    }
}
