//! Validating pairs, bounded ratios and refinement.

use riesz_dstat::pair::{ratio_bounded, refinement_check, DeferredPair, IndexRule};

fn rule(s: &str) -> IndexRule {
    s.parse().unwrap()
}

fn main() {
    for (p, q) in [("0", "n"), ("2n", "4n"), ("4n", "2n"), ("n+5", "2n"), ("3", "7")] {
        match DeferredPair::new(rule(p), rule(q)) {
            Ok(pair) => {
                let r = ratio_bounded(&pair);
                println!("{pair}: valid, p/(q-p) bounded = {} (sup {:?})", r.bounded, r.sup.map(|s| s.to_string()));
            }
            Err(e) => println!("p: {p} q: {q}: {e}"),
        }
    }

    let outer = DeferredPair::new(rule("0"), rule("4n")).unwrap();
    let inner = DeferredPair::new(rule("n"), rule("3n+1")).unwrap();
    let r = refinement_check(&inner, &outer).unwrap();
    println!("{inner} inside {outer}: gaps {:?} / {:?}, t = {:?}", r.lower_gap, r.upper_gap, r.t.map(|t| t.to_string()));
    println!("reversed: {}", refinement_check(&outer, &inner).unwrap_err());
}
