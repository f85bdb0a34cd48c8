//! Index sets, window counts and exact deferred densities.

use riesz_dstat::index_set::{count_window, IndexSet, DEFAULT_BUDGET};
use riesz_dstat::pair::{deferred_density, DeferredPair, IndexRule};

fn main() {
    let natural = DeferredPair::natural();
    let wide = DeferredPair::new(IndexRule::new(1, 0), IndexRule::new(3, 1)).unwrap();
    let unit = DeferredPair::new(IndexRule::new(1, 0), IndexRule::new(1, 1)).unwrap();

    for text in ["AP(3,1)", "POW(2)", "NOT(POW(3))", "AND(AP(6,1),NOT(POW(2)))", "OR(AP(2,0),FIN(1,3,5))"] {
        let set: IndexSet = text.parse().unwrap();
        for pair in [natural, wide] {
            let d = deferred_density(&set, &pair, 1_000_000, DEFAULT_BUDGET).unwrap();
            println!("{text:28} under {pair}: {d}");
        }
    }

    // a window of width one alternates between even and odd indices
    let evens = IndexSet::ap(2, 0).unwrap();
    println!("AP(2,0) under {unit}: {}", deferred_density(&evens, &unit, 1_000_000, DEFAULT_BUDGET).unwrap());

    let squares = IndexSet::pow(2).unwrap();
    let w = count_window(&squares, 1_000, 1_000_000, DEFAULT_BUDGET).unwrap();
    println!("squares in ({}, {}]: {}", w.lo, w.hi, w.count);
}
