//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always print.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_traits::{Signed, Zero};
use riesz_dstat::cert::{
    check_decrease, check_dstat_order_conv, check_stat_order_conv, uniqueness_probe, CheckOptions, DStatOrderCert,
    DecreaseCert, Witness,
};
use riesz_dstat::corpus::{self, CertGen};
use riesz_dstat::index_set::{natural_density, IndexSet, DEFAULT_BUDGET};
use riesz_dstat::lattice::LatticeVector;
use riesz_dstat::pair::{self, DeferredPair, DensityResult, PairError};
use riesz_dstat::rational::{self, Rational};
use riesz_dstat::suite::{self, theorem_suite};
use riesz_dstat::verdict::Verdict;

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn opts() -> CheckOptions {
    CheckOptions {
        prefix_n: 400,
        ..CheckOptions::default()
    }
}

fn lattice_identities() -> Outcome {
    suite::lattice_identity_sweep(SEED, 10_000)?;
    Ok("10000 random tuples in dims 1, 2, 5".into())
}

fn density_oracle() -> Outcome {
    suite::count_oracle_sweep(SEED, 1_000, 100_000)?;
    // Exact densities against the one-period route, on random sets.
    let mut g = CertGen::new(SEED);
    for _ in 0..200 {
        let set = g.random_set(3);
        let d = pair::deferred_density(&set, &DeferredPair::natural(), 1_000_000, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        if d.exact() != Some(&natural_density(&set)) {
            return Err(format!("{set}: {d} vs one-period density {}", natural_density(&set)));
        }
    }
    let natural = DeferredPair::natural();
    let n_max = 1_000_000;
    for c in [2, 3, 5] {
        let set = IndexSet::ap(c, 0).map_err(|e| e.to_string())?;
        let exact = pair::deferred_density(&set, &natural, n_max, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        if exact != DensityResult::Exact(rational::rat(1, c as i64)) {
            return Err(format!("AP({c},0): {exact}"));
        }
        match pair::estimate_density(&set, &natural, n_max, DEFAULT_BUDGET).map_err(|e| e.to_string())? {
            DensityResult::Estimated { value, oscillation, .. } => {
                if (value.clone() - rational::rat(1, c as i64)).abs() > oscillation {
                    return Err(format!("AP({c},0): partial {value} outside oscillation {oscillation}"));
                }
            }
            other => return Err(format!("AP({c},0): estimate {other}")),
        }
    }
    let cubes = IndexSet::pow(3).map_err(|e| e.to_string())?;
    let exact = pair::deferred_density(&cubes, &natural, n_max, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let partial = natural.partial_density(&cubes, n_max, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    if exact != DensityResult::Exact(Rational::zero()) || partial > rational::rat(1, 100) {
        return Err(format!("POW(3): {exact}, partial {partial}"));
    }
    Ok(format!(
        "1000 window counts, 200 exact densities; POW(3) partial at 10^6 = {}",
        rational::canonical(&partial)
    ))
}

fn cube_example() -> Outcome {
    let guarded = corpus::cube_decrease();
    let v = check_decrease(&guarded, &opts());
    if v.verdict != Verdict::Verified {
        return Err(format!("guarded: {} ({:?})", v.verdict, v.evidence));
    }
    let unguarded = DecreaseCert {
        k: IndexSet::All,
        ..guarded
    };
    let v = check_decrease(&unguarded, &opts());
    match (v.verdict, &v.witness) {
        (Verdict::Refuted, Some(Witness::Consecutive { k, next, .. })) => {
            let straddles = (1u64..).map(|j| j * j * j).take_while(|&c| c <= *next).any(|c| *k < c);
            if *next == k + 1 && straddles {
                Ok(format!("guarded verified; K = ALL refuted at ({k}, {next})"))
            } else {
                Err(format!("witness ({k}, {next}) does not straddle a cube"))
            }
        }
        (verdict, w) => Err(format!("unguarded: {verdict} with {w:?}")),
    }
}

fn alternating_example() -> Outcome {
    match corpus::printed_pair() {
        Err(e @ PairError::NotStrictlyBelow { .. }) if e.to_string().contains("p_n < q_n") => {}
        other => return Err(format!("printed pair: {other:?}")),
    }
    let r = corpus::alternating_example(&opts());
    if r.falsify.entries.len() != 30 {
        return Err(format!("{} whitelist entries", r.falsify.entries.len()));
    }
    if !r.unverifiable_as_printed() {
        return Err("some dominator escaped density 1".into());
    }
    let json = r.to_json();
    if json["unverifiable_as_printed"] != true {
        return Err("report does not flag the example".into());
    }
    Ok("printed pair rejected; 30/30 dominators violate with density 1".into())
}

const FAMILIES: [&str; 8] = [
    "linear_combination",
    "lattice_operations",
    "equal_modulo_null_set",
    "subsequence",
    "statistical_implies_deferred",
    "monotone_convergence",
    "ideal",
    "order_preservation",
];

fn theorem_instances() -> Outcome {
    let r = theorem_suite(SEED, 100, &opts());
    for name in FAMILIES {
        let t = r.tally(name).ok_or(format!("missing family {name}"))?;
        if t.failed > 0 || t.passed != 100 {
            return Err(format!("{name}: {} passed, {} failed: {:?}", t.passed, t.failed, t.failures));
        }
    }
    Ok(format!("{} families x 100 trials", FAMILIES.len()))
}

fn specialization() -> Outcome {
    suite::cesaro_sweep(SEED, 1_000)?;
    let mut g = CertGen::new(SEED ^ 0x5eed);
    let mut corpus_certs: Vec<DStatOrderCert> = vec![
        corpus::cube_self_cert(),
        corpus::cube_noise_cert(),
        corpus::alternating_cert(1, 1).with_pair(DeferredPair::natural()),
    ];
    for _ in 0..100 {
        let dim = g.dim();
        corpus_certs.push(g.cert(dim, DeferredPair::natural()));
    }
    for c in &corpus_certs {
        let (d, s) = (check_dstat_order_conv(c, &opts()), check_stat_order_conv(c, &opts()));
        if d.verdict != s.verdict {
            return Err(format!("x = {}: deferred {} vs statistical {}", c.x, d.verdict, s.verdict));
        }
    }
    let mut probes = 0;
    for c in &corpus_certs {
        let shift = LatticeVector::new(vec![rational::int(1); c.dim()]).map_err(|e| e.to_string())?;
        let other = DStatOrderCert {
            limit: c.limit.add(&shift).map_err(|e| e.to_string())?,
            ..c.clone()
        };
        if uniqueness_probe(c, &other, &opts()).verdict == Verdict::Verified {
            return Err(format!("distinct limits {} and {} both accepted", c.limit, other.limit));
        }
        probes += 1;
    }
    Ok(format!(
        "1000 Cesaro cases; {} certificates agree on both paths; {probes} uniqueness probes",
        corpus_certs.len()
    ))
}

fn cli_determinism() -> Outcome {
    let files = common::spec_files();
    for spec in &files {
        let first = common::render(spec, 1);
        if first != common::render(spec, 1) || first != common::render(spec, 4) {
            return Err(format!("{} is not reproducible", spec.display()));
        }
        let golden = std::fs::read_to_string(common::golden_path(spec)).map_err(|e| e.to_string())?;
        if first != golden {
            return Err(format!("{} differs from its golden report", spec.display()));
        }
    }
    Ok(format!("{} spec files, 3 runs each, jobs 1 and 4", files.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("lattice identities", lattice_identities),
        ("density oracle equivalence", density_oracle),
        ("cube example", cube_example),
        ("alternating example", alternating_example),
        ("theorem instances", theorem_instances),
        ("specialization", specialization),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
