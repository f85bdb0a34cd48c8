//! The built-in theorem suite: identity sweeps, oracle sweeps, the two
//! worked examples, and derive-and-recheck instances of every result.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cert::{
    check_decrease, check_dstat_order_conv, check_order_conv, check_stat_order_conv, derive_lattice_cert,
    derive_linear_cert, equal_mod_null_transfer, ideal_check, lift, monotone_order_check, order_preservation_check,
    stat_implies_deferred_check, subsequence_check, uniqueness_probe, CheckOptions, CheckVerdict, DStatOrderCert,
    LatticeOp, OrderConvCert,
};
use crate::corpus::{self, CertGen};
use crate::index_set::{count_window, oracle_count, IndexSet};
use crate::lattice::LatticeVector;
use crate::pair::{DeferredPair, IndexRule};
use crate::rational::{self, Rational};
use crate::sequence::{cesaro_mean, deferred_cesaro, Piece, RuleSequence};
use crate::term::Term;
use crate::verdict::Verdict;

/// Results for one theorem family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    /// The first few failure descriptions.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: u64,
    pub tallies: Vec<Tally>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0)
    }

    pub fn tally(&self, name: &str) -> Option<&Tally> {
        self.tallies.iter().find(|t| t.name == name)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .tallies
            .iter()
            .map(|t| json!({ "theorem": t.name, "passed": t.passed, "failed": t.failed, "failures": t.failures }))
            .collect();
        json!({ "seed": self.seed, "trials": self.trials, "theorems": rows, "all_passed": self.all_passed() })
    }
}

type Trial = fn(u64, &CheckOptions) -> Result<(), String>;

/// Every family in the suite, with its per-trial check.
pub const THEOREMS: [(&str, Trial); 16] = [
    ("lattice_identities", trial_lattice_identities),
    ("window_count_oracle", trial_count_oracle),
    ("cesaro_specialization", trial_cesaro),
    ("cube_example", trial_cube_example),
    ("alternating_example", trial_alternating_example),
    ("linear_combination", trial_linear),
    ("lattice_operations", trial_lattice_ops),
    ("equal_modulo_null_set", trial_transfer),
    ("subsequence", trial_subsequence),
    ("statistical_implies_deferred", trial_stat_implies),
    ("monotone_convergence", trial_monotone),
    ("ideal", trial_ideal),
    ("order_preservation", trial_order_preservation),
    ("uniqueness", trial_uniqueness),
    ("natural_pair_specialization", trial_specialization),
    ("order_convergence_lifts", trial_lift),
];

const KEPT_FAILURES: usize = 5;

fn trial_seed(seed: u64, family: usize, trial: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((family as u64) << 32)
        .wrapping_add(trial)
}

/// Runs `trials` seeded instances of every family.
pub fn theorem_suite(seed: u64, trials: u64, opts: &CheckOptions) -> SuiteReport {
    let tallies = THEOREMS
        .iter()
        .enumerate()
        .map(|(family, (name, run))| {
            let results: Vec<Result<(), String>> = (0..trials)
                .into_par_iter()
                .map(|t| run(trial_seed(seed, family, t), opts))
                .collect();
            let failures: Vec<String> = results.iter().filter_map(|r| r.clone().err()).collect();
            Tally {
                name,
                passed: results.len() as u64 - failures.len() as u64,
                failed: failures.len() as u64,
                failures: failures.into_iter().take(KEPT_FAILURES).collect(),
            }
        })
        .collect();
    SuiteReport { seed, trials, tallies }
}

fn expect_verified(what: &str, v: &CheckVerdict, cert: Option<&DStatOrderCert>) -> Result<(), String> {
    if v.verdict == Verdict::Verified {
        return Ok(());
    }
    let shown = cert.map(|c| format!(" for x = {}, limit {}", c.x, c.limit)).unwrap_or_default();
    Err(format!("{what}: {}{shown}; evidence: {}", v.verdict, v.evidence.join(" | ")))
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> LatticeVector {
    LatticeVector::new(
        (0..dim)
            .map(|_| rational::rat(rng.gen_range(-50..=50), rng.gen_range(1..=12)))
            .collect(),
    )
    .expect("dim >= 1")
}

/// Checks the lattice identities on `cases` random tuples in dims 1, 2, 5.
pub fn lattice_identity_sweep(seed: u64, cases: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let dim = [1, 2, 5][rng.gen_range(0..3)];
        let [x, y, a, b] = [0; 4].map(|_| random_vector(&mut rng, dim));
        let fail = |what: &str| Err(format!("case {case}: {what} fails for x = {x}, y = {y}, a = {a}, b = {b}"));
        let p = x.parts();
        let zero = LatticeVector::zero(dim);
        if x.join(&y).unwrap().add(&x.meet(&y).unwrap()).unwrap() != x.add(&y).unwrap() {
            return fail("x∨y + x∧y = x + y");
        }
        if p.abs != p.pos.add(&p.neg).unwrap() {
            return fail("|x| = x⁺ + x⁻");
        }
        if x != p.pos.sub(&p.neg).unwrap() {
            return fail("x = x⁺ − x⁻");
        }
        if p.pos.meet(&p.neg).unwrap() != zero {
            return fail("x⁺ ∧ x⁻ = 0");
        }
        if !x.add(&y).unwrap().abs().le(&x.abs().add(&y.abs()).unwrap()).unwrap() {
            return fail("|x + y| <= |x| + |y|");
        }
        let lhs = x.join(&y).unwrap().sub(&a.join(&b).unwrap()).unwrap().abs();
        let rhs = x.sub(&a).unwrap().abs().add(&y.sub(&b).unwrap().abs()).unwrap();
        if !lhs.le(&rhs).unwrap() {
            return fail("|x∨y − a∨b| <= |x−a| + |y−b|");
        }
    }
    Ok(())
}

/// Compares closed-form window counts with the brute-force oracle.
pub fn count_oracle_sweep(seed: u64, cases: u64, max_window: u64) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    for case in 0..cases {
        let set = g.random_set(3);
        let lo = g.below(max_window);
        let hi = lo + 1 + g.below(max_window);
        let fast = count_window(&set, lo, hi, u64::MAX).map_err(|e| e.to_string())?;
        let slow = oracle_count(&set, lo, hi).map_err(|e| e.to_string())?;
        if fast != slow {
            return Err(format!(
                "case {case}: {set} on ({lo}, {hi}]: closed form {} vs oracle {}",
                fast.count, slow.count
            ));
        }
    }
    Ok(())
}

/// A random scalar sequence with affine pieces.
pub fn random_affine_sequence(rng: &mut ChaCha8Rng) -> RuleSequence {
    let mut term = || {
        let a = rational::rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        let b = rational::rat(rng.gen_range(-9..=9), rng.gen_range(1..=3));
        Term::parse("n").expect("n").scale(&a).add(&Term::constant(b))
    };
    let pieces = vec![
        Piece::new(IndexSet::ap(2, 0).expect("valid"), vec![term()]),
        Piece::new(IndexSet::pow(2).expect("valid"), vec![term()]),
        Piece::new(IndexSet::All, vec![term()]),
    ];
    RuleSequence::new(pieces).expect("total")
}

/// `D_{0,n}` equals the Cesàro mean, and every deferred mean equals direct summation.
pub fn cesaro_sweep(seed: u64, cases: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let x = random_affine_sequence(&mut rng);
        let n = rng.gen_range(1..=1_000);
        let natural = deferred_cesaro(&x, &DeferredPair::natural(), n, u64::MAX).map_err(|e| e.to_string())?;
        if natural != cesaro_mean(&x, n).map_err(|e| e.to_string())? {
            return Err(format!("case {case}: D_(0,n) differs from the Cesàro mean at n = {n} for {x}"));
        }
        let p = IndexRule::new(rng.gen_range(0..=2), rng.gen_range(0..=3));
        let q = IndexRule::new(p.slope + rng.gen_range(1..=2), p.offset + rng.gen_range(1..=3));
        let pair = DeferredPair::new(p, q).map_err(|e| e.to_string())?;
        let (lo, hi) = pair.window(n);
        let direct = (lo + 1..=hi).fold(Rational::zero(), |acc, k| acc + x.eval_coord(k, 0)) / rational::from_u64(hi - lo);
        if deferred_cesaro(&x, &pair, n, u64::MAX).map_err(|e| e.to_string())? != direct {
            return Err(format!("case {case}: deferred mean differs from direct summation under {pair}"));
        }
    }
    Ok(())
}

fn trial_lattice_identities(seed: u64, _: &CheckOptions) -> Result<(), String> {
    lattice_identity_sweep(seed, 100)
}

fn trial_count_oracle(seed: u64, _: &CheckOptions) -> Result<(), String> {
    count_oracle_sweep(seed, 10, 10_000)
}

fn trial_cesaro(seed: u64, _: &CheckOptions) -> Result<(), String> {
    cesaro_sweep(seed, 10)
}

fn trial_cube_example(_: u64, opts: &CheckOptions) -> Result<(), String> {
    let cert = corpus::cube_decrease();
    expect_verified("cube decrease", &check_decrease(&cert, opts), None)?;
    let unguarded = crate::cert::DecreaseCert {
        k: IndexSet::All,
        ..cert
    };
    let v = check_decrease(&unguarded, opts);
    match (&v.verdict, &v.witness) {
        (Verdict::Refuted, Some(crate::cert::Witness::Consecutive { k, next, .. })) => {
            let cube = (1..).map(|j: u64| j * j * j).find(|&c| c >= *next).expect("cubes are unbounded");
            if *k < cube && cube <= *next {
                Ok(())
            } else {
                Err(format!("witness ({k}, {next}) does not straddle a cube"))
            }
        }
        _ => Err(format!("unguarded cube sequence: {}", v.verdict)),
    }
}

fn trial_alternating_example(_: u64, opts: &CheckOptions) -> Result<(), String> {
    let r = corpus::alternating_example(opts);
    if r.unverifiable_as_printed() {
        Ok(())
    } else {
        Err("alternating example: falsifier did not report density 1 everywhere".into())
    }
}

fn trial_linear(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let (dim, pair) = (g.dim(), g.pair());
    let a = g.cert(dim, pair);
    let b = g.cert(dim, pair);
    let (l, m) = (g.rational(3), g.rational(3));
    let d = derive_linear_cert(&a, &b, &l, &m).map_err(|e| e.to_string())?;
    expect_verified("linear combination", &check_dstat_order_conv(&d, opts), Some(&d))
}

fn trial_lattice_ops(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let (dim, pair) = (g.dim(), g.pair());
    let a = g.cert(dim, pair);
    let b = g.cert(dim, pair);
    for op in LatticeOp::ALL {
        let d = derive_lattice_cert(&a, Some(&b), op).map_err(|e| e.to_string())?;
        expect_verified(op.as_str(), &check_dstat_order_conv(&d, opts), Some(&d))?;
    }
    Ok(())
}

fn trial_transfer(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let (dim, pair) = (g.dim(), g.pair());
    let cert = g.cert(dim, pair);
    let x = g.null_perturbation(&cert);
    expect_verified("transfer", &equal_mod_null_transfer(&x, &cert, opts), Some(&cert))
}

fn trial_subsequence(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let (dim, pair) = (g.dim(), g.pair());
    let cert = g.cert(dim, pair);
    let kprime = g.thick_set();
    expect_verified(&format!("subsequence on {kprime}"), &subsequence_check(&cert, &kprime, opts), Some(&cert))
}

fn trial_stat_implies(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let dim = g.dim();
    let cert = g.cert(dim, DeferredPair::natural());
    let target = g.bounded_target();
    expect_verified(
        &format!("re-target to {target}"),
        &stat_implies_deferred_check(&cert, &target, opts),
        Some(&cert),
    )
}

fn trial_monotone(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let (dim, pair) = (g.dim(), g.pair());
    let cert = g.monotone_cert(dim, pair);
    expect_verified("monotone", &monotone_order_check(&cert, opts), Some(&cert))
}

fn trial_ideal(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let (dim, pair) = (g.dim(), g.pair());
    let (cert, ideal) = g.ideal_cert(dim, pair);
    expect_verified("ideal", &ideal_check(&cert, &ideal, opts), Some(&cert))
}

fn trial_order_preservation(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let (dim, pair) = (g.dim(), g.pair());
    let (a, b) = g.ordered_certs(dim, pair);
    expect_verified("order preservation", &order_preservation_check(&a, &b, opts), Some(&a))
}

fn trial_uniqueness(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let (dim, pair) = (g.dim(), g.pair());
    let a = g.cert(dim, pair);
    expect_verified("uniqueness with itself", &uniqueness_probe(&a, &a, opts), Some(&a))?;
    let mut shift = g.lattice_vector(dim);
    if shift.is_zero() {
        shift = LatticeVector::new(vec![rational::int(1); dim]).expect("dim >= 1");
    }
    let b = DStatOrderCert {
        limit: a.limit.add(&shift).expect("same dim"),
        ..a.clone()
    };
    let v = uniqueness_probe(&a, &b, opts);
    if v.verdict == Verdict::Verified {
        return Err(format!("two distinct limits {} and {} were both accepted", a.limit, b.limit));
    }
    Ok(())
}

fn trial_specialization(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let dim = g.dim();
    let cert = g.cert(dim, DeferredPair::natural());
    let deferred = check_dstat_order_conv(&cert, opts);
    let statistical = check_stat_order_conv(&cert, opts);
    if deferred.verdict != statistical.verdict {
        return Err(format!(
            "pair (0, n) gives {} but the statistical path gives {}",
            deferred.verdict, statistical.verdict
        ));
    }
    expect_verified("specialization", &deferred, Some(&cert))
}

fn trial_lift(seed: u64, opts: &CheckOptions) -> Result<(), String> {
    let mut g = CertGen::new(seed);
    let (dim, pair) = (g.dim(), g.pair());
    let m = g.monotone_cert(dim, pair);
    let order = OrderConvCert::new(m.x, m.limit, m.z).map_err(|e| e.to_string())?;
    expect_verified("order convergence", &check_order_conv(&order, opts), None)?;
    let lifted = lift(&order, g.pair());
    expect_verified("lifted", &check_dstat_order_conv(&lifted, opts), Some(&lifted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_run_passes() {
        let opts = CheckOptions {
            prefix_n: 200,
            ..CheckOptions::default()
        };
        let r = theorem_suite(1, 2, &opts);
        for t in &r.tallies {
            assert_eq!(t.failed, 0, "{}: {:?}", t.name, t.failures);
        }
    }
}
