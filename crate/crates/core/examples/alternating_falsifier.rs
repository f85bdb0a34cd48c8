//! The alternating example: the printed pair is rejected, and under the
//! swapped pair every whitelisted dominator fails on a set of density one.

use riesz_dstat::cert::CheckOptions;
use riesz_dstat::corpus;

fn main() {
    let report = corpus::alternating_example(&CheckOptions::default());
    match &report.printed {
        Ok(pair) => println!("printed pair {pair} accepted"),
        Err(e) => println!("printed pair rejected: {e}"),
    }
    println!("x = {}", corpus::alternating_x());
    for e in report.falsify.entries.iter().filter(|e| e.c == 1 || e.c == 10) {
        println!("  z = {}/n^{}: violation density {}", e.c, e.e, e.violation_density);
    }
    println!("unverifiable as printed: {}", report.unverifiable_as_printed());
}
