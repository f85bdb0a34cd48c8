//! Convergence certificates and their checkers.
//!
//! A certificate bundles the existential witnesses of a convergence claim
//! (limit, dominating sequence, index set, pair). Checkers either discharge
//! every asymptotic part symbolically and answer `verified`, find a
//! concrete counterexample and answer `refuted`, or say `inconclusive`.

mod derive;
mod falsify;
mod theorems;

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::index_set::{natural_density, CountError, EventualModel, IndexSet, DEFAULT_BUDGET};
use crate::lattice::{LatticeError, LatticeVector};
use crate::pair::{self, DeferredPair, DensityResult};
use crate::rational::{self, Rational};
use crate::sequence::{RuleSequence, SequenceError};
use crate::term::Limit;
use crate::verdict::Verdict;

pub use derive::{derive_lattice_cert, derive_linear_cert, lift, LatticeOp};
pub use falsify::{falsify_whitelist, whitelist, FalsifyEntry, FalsifyReport};
pub use theorems::{
    class_membership, equal_mod_null_transfer, ideal_check, monotone_order_check, order_preservation_check,
    stat_implies_deferred_check, subsequence_check, uniqueness_probe,
};

pub const DEFAULT_PREFIX: u64 = 100_000;
pub const DEFAULT_N_MAX: u64 = 1_000_000;
/// Largest index scanned when looking for a member of an infinite set.
const WITNESS_SCAN: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("dimension mismatch: {what} has dim {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("certificates use different pairs ({left} vs {right})")]
    PairMismatch { left: String, right: String },
    #[error("operation `{0}` needs a second certificate")]
    MissingOperand(&'static str),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub prefix_n: u64,
    pub n_max: u64,
    pub budget: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            prefix_n: DEFAULT_PREFIX,
            n_max: DEFAULT_N_MAX,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// `z` decreases to zero along a set `K` of deferred density one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecreaseCert {
    pub z: RuleSequence,
    pub k: IndexSet,
    pub pair: DeferredPair,
}

/// `|x_n − limit| <= y_n` for every `n`, with `y_n ↓ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderConvCert {
    pub x: RuleSequence,
    pub limit: LatticeVector,
    pub y: RuleSequence,
}

/// `|x_k − limit| <= z_k` for `k ∈ K`, `δ_{p,q}(K) = 1`, and `z` decreasing
/// to zero along `zset` (another set of density one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DStatOrderCert {
    pub x: RuleSequence,
    pub limit: LatticeVector,
    pub z: RuleSequence,
    pub k: IndexSet,
    pub zset: IndexSet,
    pub pair: DeferredPair,
}

fn check_dim(what: &'static str, expected: usize, found: usize) -> Result<(), CertError> {
    if expected == found {
        Ok(())
    } else {
        Err(CertError::DimensionMismatch { what, expected, found })
    }
}

impl OrderConvCert {
    pub fn new(x: RuleSequence, limit: LatticeVector, y: RuleSequence) -> Result<Self, CertError> {
        check_dim("limit", x.dim(), limit.dim())?;
        check_dim("dominator", x.dim(), y.dim())?;
        Ok(Self { x, limit, y })
    }
}

impl DStatOrderCert {
    /// Certificate whose dominator decreases along `K` itself.
    pub fn new(
        x: RuleSequence,
        limit: LatticeVector,
        z: RuleSequence,
        k: IndexSet,
        pair: DeferredPair,
    ) -> Result<Self, CertError> {
        Self::with_zset(x, limit, z, k.clone(), k, pair)
    }

    pub fn with_zset(
        x: RuleSequence,
        limit: LatticeVector,
        z: RuleSequence,
        k: IndexSet,
        zset: IndexSet,
        pair: DeferredPair,
    ) -> Result<Self, CertError> {
        check_dim("limit", x.dim(), limit.dim())?;
        check_dim("dominator", x.dim(), z.dim())?;
        Ok(Self {
            x,
            limit,
            z,
            k,
            zset,
            pair,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn decrease(&self) -> DecreaseCert {
        DecreaseCert {
            z: self.z.clone(),
            k: self.zset.clone(),
            pair: self.pair,
        }
    }

    pub fn with_pair(&self, pair: DeferredPair) -> Self {
        Self { pair, ..self.clone() }
    }
}

/// A concrete, re-evaluable counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A single index where a pointwise claim fails; coordinates are 1-based.
    Index {
        n: u64,
        coordinate: Option<usize>,
        detail: String,
    },
    /// Consecutive members `k < next` of the index set with `z_next ≰ z_k`.
    Consecutive { k: u64, next: u64, coordinate: usize },
    /// A set whose density contradicts the claim.
    Density { set: String, density: DensityResult },
    /// The tail limit of a coordinate is not zero.
    Limit { coordinate: usize, limit: String },
}

impl Witness {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Index { n, coordinate, detail } => {
                json!({ "kind": "index", "n": n, "coordinate": coordinate, "detail": detail })
            }
            Witness::Consecutive { k, next, coordinate } => {
                json!({ "kind": "consecutive", "k": k, "next": next, "coordinate": coordinate })
            }
            Witness::Density { set, density } => json!({
                "kind": "density",
                "set": set,
                "density": density_json(density),
            }),
            Witness::Limit { coordinate, limit } => {
                json!({ "kind": "limit", "coordinate": coordinate, "limit": limit })
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Index { n, detail, .. } => write!(f, "n = {n}: {detail}"),
            Witness::Consecutive { k, next, coordinate } => {
                write!(f, "z_{next} exceeds z_{k} in coordinate {coordinate}")
            }
            Witness::Density { set, density } => write!(f, "density of {set} is {density}"),
            Witness::Limit { coordinate, limit } => write!(f, "coordinate {coordinate} tends to {limit}"),
        }
    }
}

pub fn density_json(d: &DensityResult) -> Value {
    match d {
        DensityResult::Exact(v) => json!({ "kind": "exact", "value": rational::canonical(v) }),
        DensityResult::Estimated {
            value,
            at_n,
            oscillation,
        } => json!({
            "kind": "estimated",
            "value": rational::canonical(value),
            "at_n": at_n,
            "oscillation": rational::canonical(oscillation),
        }),
        DensityResult::NoLimit {
            n_a,
            value_a,
            n_b,
            value_b,
        } => json!({
            "kind": "no_limit",
            "n_a": n_a,
            "value_a": rational::canonical(value_a),
            "n_b": n_b,
            "value_b": rational::canonical(value_b),
        }),
        DensityResult::Inconclusive(why) => json!({ "kind": "inconclusive", "reason": why }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub evidence: Vec<String>,
}

impl CheckVerdict {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub(crate) fn precondition(reason: impl Into<String>, mut evidence: Vec<String>, witness: Option<Witness>) -> Self {
        evidence.push(reason.into());
        Self {
            verdict: Verdict::PreconditionFailed,
            witness,
            evidence,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "witness": self.witness.as_ref().map(Witness::to_json),
            "evidence": self.evidence,
        })
    }
}

/// Accumulates sub-claims into one verdict: the first refutation wins,
/// then any undecided claim makes the whole check inconclusive.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    witness: Option<Witness>,
    refuted: bool,
    unknown: bool,
    evidence: Vec<String>,
}

impl Outcome {
    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.evidence.push(s.into());
    }

    pub(crate) fn refute(&mut self, witness: Witness, s: impl Into<String>) {
        self.evidence.push(s.into());
        if !self.refuted {
            self.refuted = true;
            self.witness = Some(witness);
        }
    }

    pub(crate) fn unknown(&mut self, s: impl Into<String>) {
        self.unknown = true;
        self.evidence.push(s.into());
    }

    pub(crate) fn is_refuted(&self) -> bool {
        self.refuted
    }

    pub(crate) fn absorb(&mut self, label: &str, other: CheckVerdict) {
        for e in other.evidence {
            self.evidence.push(format!("{label}: {e}"));
        }
        match other.verdict {
            Verdict::Verified => {}
            Verdict::Refuted | Verdict::PreconditionFailed => {
                if !self.refuted {
                    self.refuted = true;
                    self.witness = other.witness;
                }
            }
            Verdict::Consistent | Verdict::Inconclusive => self.unknown = true,
        }
    }

    pub(crate) fn finish(self) -> CheckVerdict {
        let verdict = if self.refuted {
            Verdict::Refuted
        } else if self.unknown {
            Verdict::Inconclusive
        } else {
            Verdict::Verified
        };
        CheckVerdict {
            verdict,
            witness: self.witness,
            evidence: self.evidence,
        }
    }
}

/// How "density one" is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DensityMode {
    Deferred(DeferredPair),
    /// Natural density computed directly from one period, independent of
    /// the deferred machinery.
    Natural,
}

impl DensityMode {
    pub(crate) fn density(&self, set: &IndexSet, opts: &CheckOptions) -> Result<DensityResult, CountError> {
        match self {
            DensityMode::Deferred(pair) => pair::deferred_density(set, pair, opts.n_max, opts.budget),
            DensityMode::Natural => {
                if set.periodic_skeleton().period() > opts.budget {
                    Ok(DensityResult::Inconclusive("period exceeds the budget".into()))
                } else {
                    Ok(DensityResult::Exact(natural_density(set)))
                }
            }
        }
    }

    fn label(&self) -> String {
        match self {
            DensityMode::Deferred(p) => format!("δ[{p}]"),
            DensityMode::Natural => "δ".to_string(),
        }
    }
}

/// What is known about a set being empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Emptiness {
    Empty,
    /// Non-empty; the least member when one was found.
    Inhabited(Option<u64>),
    Unknown,
}

pub(crate) fn emptiness(set: &IndexSet, budget: u64) -> Emptiness {
    if *set == IndexSet::Empty {
        return Emptiness::Empty;
    }
    match EventualModel::analyze(set, budget) {
        Ok(model) => match model.finite_members() {
            Some(m) if m.is_empty() => Emptiness::Empty,
            Some(m) => Emptiness::Inhabited(m.first().copied()),
            None => Emptiness::Inhabited((1..=WITNESS_SCAN).find(|&n| set.contains(n))),
        },
        Err(_) => Emptiness::Unknown,
    }
}

/// `(i, last)`: every member of `set` beyond `last` is served by piece `i`.
pub(crate) fn eventual_piece(seq: &RuleSequence, set: &IndexSet, budget: u64) -> Option<(usize, u64)> {
    (0..seq.pieces().len()).find_map(|i| {
        let rest = set.clone().minus(seq.effective_guard(i).clone());
        let model = EventualModel::analyze(&rest, budget).ok()?;
        let members = model.finite_members()?;
        Some((i, members.last().copied().unwrap_or(0)))
    })
}

fn density_one(mode: DensityMode, set: &IndexSet, what: &str, opts: &CheckOptions, out: &mut Outcome) {
    match mode.density(set, opts) {
        Ok(DensityResult::Exact(d)) if d.is_one() => out.note(format!("{}({what}) = 1 exactly", mode.label())),
        Ok(d @ (DensityResult::Exact(_) | DensityResult::NoLimit { .. })) => {
            let msg = format!("{}({what}) is {d}, not 1", mode.label());
            out.refute(
                Witness::Density {
                    set: set.to_string(),
                    density: d,
                },
                msg,
            );
        }
        Ok(d) => out.unknown(format!("{}({what}) not exactly computable: {d}", mode.label())),
        Err(e) => out.unknown(format!("{}({what}): {e}", mode.label())),
    }
}

fn first_increase(prev: &LatticeVector, next: &LatticeVector) -> Option<usize> {
    prev.coords().iter().zip(next.coords()).position(|(a, b)| b > a)
}

fn first_negative(v: &LatticeVector) -> Option<usize> {
    v.coords().iter().position(|c| c < &Rational::zero())
}

/// `z` is nonincreasing along `set` with infimum zero.
fn decrease_claims(z: &RuleSequence, set: &IndexSet, opts: &CheckOptions, out: &mut Outcome) {
    let mut scan_to = opts.prefix_n;
    let mut symbolic = false;
    match eventual_piece(z, set, opts.budget) {
        None => out.unknown("the set meets several pieces of z infinitely often; tail monotonicity undecided"),
        Some((i, last_exception)) => {
            let mut from = last_exception + 1;
            let mut tail_ok = true;
            for (c, term) in z.pieces()[i].terms.iter().enumerate() {
                let class = term.tail_class();
                match &class.limit {
                    Limit::Finite(v) if v.is_zero() => {}
                    other => {
                        let shown = match other {
                            Limit::Finite(v) => rational::canonical(v),
                            Limit::PosInfinity => "+inf".into(),
                            Limit::NegInfinity => "-inf".into(),
                            Limit::Unknown => "unknown".into(),
                        };
                        let w = Witness::Limit {
                            coordinate: c + 1,
                            limit: shown.clone(),
                        };
                        out.refute(w, format!("infimum claim fails: coordinate {} of z tends to {shown}", c + 1));
                        tail_ok = false;
                    }
                }
                match class.monotone.nonincreasing_from() {
                    Some(f) => from = from.max(f),
                    None => {
                        out.unknown(format!("coordinate {} of piece {} not eventually nonincreasing", c + 1, i + 1));
                        tail_ok = false;
                    }
                }
            }
            if tail_ok {
                symbolic = true;
                scan_to = scan_to.max(from);
                out.note(format!(
                    "tail: piece {} serves the set beyond {last_exception}, nonincreasing to 0 from {from}",
                    i + 1
                ));
            }
        }
    }
    if out.is_refuted() {
        return;
    }
    // Exact scan over consecutive members; the pair straddling `scan_to`
    // is included so the prefix and the symbolic tail overlap.
    let cap = WITNESS_SCAN.max(scan_to.saturating_mul(2));
    let next_member = |after: u64| (after + 1..=cap).find(|&n| set.contains(n));
    let Some(mut k) = next_member(0) else {
        out.unknown("the set has no members within the scan");
        return;
    };
    let mut zk = z.eval(k);
    if let Some(c) = first_negative(&zk) {
        let w = Witness::Index {
            n: k,
            coordinate: Some(c + 1),
            detail: format!("z_{k} = {zk} is not nonnegative"),
        };
        out.refute(w, format!("z_{k} has a negative coordinate"));
        return;
    }
    while k <= scan_to {
        let Some(next) = next_member(k) else { break };
        let zn = z.eval(next);
        if let Some(c) = first_increase(&zk, &zn) {
            let w = Witness::Consecutive {
                k,
                next,
                coordinate: c + 1,
            };
            out.refute(w, format!("not decreasing on the set: z_{k} = {zk}, z_{next} = {zn}"));
            return;
        }
        if let Some(c) = first_negative(&zn) {
            let w = Witness::Index {
                n: next,
                coordinate: Some(c + 1),
                detail: format!("z_{next} = {zn} is not nonnegative"),
            };
            out.refute(w, format!("z_{next} has a negative coordinate"));
            return;
        }
        k = next;
        zk = zn;
    }
    if symbolic {
        out.note(format!("consecutive members checked exactly up to {k}"));
    } else {
        out.note(format!("prefix consistent up to {k}"));
    }
}

fn check_decrease_with(cert: &DecreaseCert, mode: DensityMode, opts: &CheckOptions) -> CheckVerdict {
    let mut out = Outcome::default();
    density_one(mode, &cert.k, "K", opts, &mut out);
    decrease_claims(&cert.z, &cert.k, opts, &mut out);
    out.finish()
}

/// Deferred statistical order decrease of `z` along `K`.
pub fn check_decrease(cert: &DecreaseCert, opts: &CheckOptions) -> CheckVerdict {
    check_decrease_with(cert, DensityMode::Deferred(cert.pair), opts)
}

fn domination_detail(x: &RuleSequence, limit: &LatticeVector, z: &RuleSequence, n: u64) -> String {
    let diff = x.eval(n).sub(limit).expect("same dim").abs();
    format!("|x_{n} − l| = {diff} ≰ z_{n} = {}", z.eval(n))
}

/// `|x_k − limit| <= z_k` for every `k` in `set`.
fn domination_claims(
    x: &RuleSequence,
    limit: &LatticeVector,
    z: &RuleSequence,
    set: &IndexSet,
    opts: &CheckOptions,
    out: &mut Outcome,
) -> Option<IndexSet> {
    let violations = match x.domination_violations(limit, z) {
        Ok(v) => v,
        Err(e) => {
            prefix_domination(x, limit, z, set, opts, out);
            out.unknown(format!("violation set not expressible ({e})"));
            return None;
        }
    };
    match emptiness(&violations.clone().and(set.clone()), opts.budget) {
        Emptiness::Empty => out.note("domination holds on the whole set (exact)"),
        Emptiness::Inhabited(Some(n)) => {
            let w = Witness::Index {
                n,
                coordinate: None,
                detail: domination_detail(x, limit, z, n),
            };
            out.refute(w, format!("domination fails at n = {n}"));
        }
        Emptiness::Inhabited(None) => out.unknown("domination fails somewhere beyond the witness scan"),
        Emptiness::Unknown => {
            prefix_domination(x, limit, z, set, opts, out);
            out.unknown("emptiness of the violation set exceeds the budget");
        }
    }
    Some(violations)
}

fn prefix_domination(
    x: &RuleSequence,
    limit: &LatticeVector,
    z: &RuleSequence,
    set: &IndexSet,
    opts: &CheckOptions,
    out: &mut Outcome,
) {
    for n in (1..=opts.prefix_n).filter(|&n| set.contains(n)) {
        let diff = x.eval(n).sub(limit).expect("same dim").abs();
        if !diff.le(&z.eval(n)).expect("same dim") {
            let w = Witness::Index {
                n,
                coordinate: None,
                detail: domination_detail(x, limit, z, n),
            };
            out.refute(w, format!("domination fails at n = {n}"));
            return;
        }
    }
    out.note(format!("domination consistent on the prefix up to {}", opts.prefix_n));
}

/// Order convergence: `y ↓ 0` on all of ℕ and `|x_n − limit| <= y_n` everywhere.
pub fn check_order_conv(cert: &OrderConvCert, opts: &CheckOptions) -> CheckVerdict {
    let mut out = Outcome::default();
    decrease_claims(&cert.y, &IndexSet::All, opts, &mut out);
    domination_claims(&cert.x, &cert.limit, &cert.y, &IndexSet::All, opts, &mut out);
    out.finish()
}

fn check_dstat_with(cert: &DStatOrderCert, mode: DensityMode, opts: &CheckOptions) -> CheckVerdict {
    let mut out = Outcome::default();
    let dec = check_decrease_with(&cert.decrease(), mode, opts);
    out.absorb("dominator", dec);
    density_one(mode, &cert.k, "K", opts, &mut out);
    if let Some(v) = domination_claims(&cert.x, &cert.limit, &cert.z, &cert.k, opts, &mut out) {
        match mode.density(&v, opts) {
            Ok(d) => {
                out.note(format!("violation set density {}", d));
                if matches!(&d, DensityResult::Exact(r) if !r.is_zero()) || matches!(d, DensityResult::NoLimit { .. }) {
                    let w = Witness::Density {
                        set: v.to_string(),
                        density: d,
                    };
                    out.refute(w, "the violation set does not have density zero");
                }
            }
            Err(e) => out.note(format!("violation set density: {e}")),
        }
    }
    out.finish()
}

/// Deferred statistical order convergence.
pub fn check_dstat_order_conv(cert: &DStatOrderCert, opts: &CheckOptions) -> CheckVerdict {
    check_dstat_with(cert, DensityMode::Deferred(cert.pair), opts)
}

/// Statistical order convergence, measured with natural density and
/// ignoring the certificate's pair.
pub fn check_stat_order_conv(cert: &DStatOrderCert, opts: &CheckOptions) -> CheckVerdict {
    check_dstat_with(cert, DensityMode::Natural, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn opts() -> CheckOptions {
        CheckOptions {
            prefix_n: 2_000,
            ..CheckOptions::default()
        }
    }

    #[test]
    fn cube_decrease_is_verified() {
        let cert = corpus::cube_decrease();
        let v = check_decrease(&cert, &opts());
        assert_eq!(v.verdict, Verdict::Verified, "{:?}", v.evidence);
    }

    #[test]
    fn cube_without_guard_straddles_a_cube() {
        let mut cert = corpus::cube_decrease();
        cert.k = IndexSet::All;
        let v = check_decrease(&cert, &opts());
        assert_eq!(v.verdict, Verdict::Refuted);
        assert_eq!(
            v.witness,
            Some(Witness::Consecutive {
                k: 7,
                next: 8,
                coordinate: 2
            })
        );
    }

    #[test]
    fn nonzero_limit_refutes_decrease() {
        let z = corpus::seq(&[("ALL", &["0", "1 + 1/n"])]);
        let cert = DecreaseCert {
            z,
            k: IndexSet::All,
            pair: DeferredPair::natural(),
        };
        let v = check_decrease(&cert, &opts());
        assert_eq!(v.verdict, Verdict::Refuted);
        assert_eq!(
            v.witness,
            Some(Witness::Limit {
                coordinate: 2,
                limit: "1/1".into()
            })
        );
    }

    #[test]
    fn order_convergence() {
        let y = corpus::seq(&[("ALL", &["1/n", "1/n"])]);
        let x = corpus::seq(&[("ALL", &["1/n", "0"])]);
        let cert = OrderConvCert::new(x, LatticeVector::zero(2), y.clone()).unwrap();
        assert!(check_order_conv(&cert, &opts()).is_verified());
        let parity = corpus::seq(&[("AP(2,0)", &["1/n"]), ("ALL", &["-1/n"])]);
        let cert = OrderConvCert::new(parity, LatticeVector::zero(1), corpus::seq(&[("ALL", &["2/n"])])).unwrap();
        assert!(check_order_conv(&cert, &opts()).is_verified());
        let ones = corpus::seq(&[("ALL", &["1", "1"])]);
        let cert = OrderConvCert::new(ones, LatticeVector::zero(2), y).unwrap();
        let v = check_order_conv(&cert, &opts());
        assert_eq!(v.verdict, Verdict::Refuted);
        assert!(matches!(v.witness, Some(Witness::Index { n: 2, .. })));
    }

    #[test]
    fn cube_noise_converges_and_both_paths_agree() {
        let cert = corpus::cube_noise_cert();
        let v = check_dstat_order_conv(&cert, &opts());
        assert_eq!(v.verdict, Verdict::Verified, "{:?}", v.evidence);
        assert_eq!(check_stat_order_conv(&cert, &opts()).verdict, Verdict::Verified);
    }

    #[test]
    fn alternating_example_is_refuted() {
        let cert = corpus::alternating_cert(1, 1);
        let v = check_dstat_order_conv(&cert, &opts());
        assert_eq!(v.verdict, Verdict::Refuted);
    }
}
