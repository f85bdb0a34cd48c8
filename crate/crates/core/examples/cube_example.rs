//! A dominator that decreases to zero only off the cubes.

use riesz_dstat::cert::{check_decrease, CheckOptions, DecreaseCert};
use riesz_dstat::corpus;
use riesz_dstat::index_set::IndexSet;

fn main() {
    let opts = CheckOptions::default();
    let cert = corpus::cube_decrease();
    println!("z = {}", cert.z);

    let v = check_decrease(&cert, &opts);
    println!("K = {}: {}", cert.k, v.verdict);
    for line in &v.evidence {
        println!("  {line}");
    }

    let all = DecreaseCert { k: IndexSet::All, ..cert };
    let v = check_decrease(&all, &opts);
    println!("K = ALL: {}", v.verdict);
    if let Some(w) = &v.witness {
        println!("  witness: {w}");
    }
}
