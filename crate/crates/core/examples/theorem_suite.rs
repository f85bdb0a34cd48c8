//! Seeded theorem-instance suite with a per-family tally.

use riesz_dstat::cert::CheckOptions;
use riesz_dstat::suite::theorem_suite;

fn main() {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let opts = CheckOptions {
        prefix_n: 400,
        ..CheckOptions::default()
    };
    for seed in [1, 2] {
        let r = theorem_suite(seed, trials, &opts);
        println!("seed {seed}, {trials} trials");
        for t in &r.tallies {
            println!("  {:30} {:4} passed {:3} failed", t.name, t.passed, t.failed);
            for f in &t.failures {
                println!("    {f}");
            }
        }
    }
}
