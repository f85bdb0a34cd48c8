//! Instance checks for the convergence results on one certificate family.

use riesz_dstat::cert::{
    class_membership, equal_mod_null_transfer, ideal_check, monotone_order_check, order_preservation_check,
    stat_implies_deferred_check, subsequence_check, uniqueness_probe, CheckOptions, DStatOrderCert, DecreaseCert,
};
use riesz_dstat::corpus::{self, seq};
use riesz_dstat::index_set::IndexSet;
use riesz_dstat::lattice::{LatticeVector, OrderIdeal};
use riesz_dstat::pair::{DeferredPair, IndexRule};

fn main() {
    let opts = CheckOptions::default();
    let noise = corpus::cube_noise_cert();
    let t = seq(&[("ALL", &["1/n", "1/n"])]);
    let small = DStatOrderCert::new(
        seq(&[("ALL", &["1/n", "1/n"])]),
        LatticeVector::zero(2),
        t.clone(),
        IndexSet::All,
        DeferredPair::natural(),
    )
    .unwrap();
    let big = DStatOrderCert::new(
        seq(&[("ALL", &["1 + 1/n", "2 - 1/n"])]),
        LatticeVector::from_ints(&[1, 2]).unwrap(),
        t,
        IndexSet::All,
        DeferredPair::natural(),
    )
    .unwrap();

    let wide = DeferredPair::new(IndexRule::new(1, 0), IndexRule::new(3, 1)).unwrap();
    let perturbed = seq(&[("POW(2)", &["5", "5"]), ("POW(3)", &["0", "n"]), ("ALL", &["0", "1/n"])]);
    let shifted = DStatOrderCert {
        limit: LatticeVector::from_ints(&[0, 1]).unwrap(),
        ..noise.clone()
    };

    let rows = [
        ("subsequence on AP(2,0)", subsequence_check(&noise, &IndexSet::ap(2, 0).unwrap(), &opts)),
        ("re-targeted to (n, 3n+1)", stat_implies_deferred_check(&noise, &wide, &opts)),
        ("ideal span(e2)", ideal_check(&noise, &OrderIdeal::new([2]), &opts)),
        ("changed on the squares", equal_mod_null_transfer(&perturbed, &noise, &opts)),
        ("monotone", monotone_order_check(&small, &opts)),
        ("order preserved", order_preservation_check(&big, &small, &opts)),
        ("same limit twice", uniqueness_probe(&noise, &noise, &opts)),
        ("limits (0,0) and (0,1)", uniqueness_probe(&noise, &shifted, &opts)),
    ];
    for (name, v) in rows {
        println!("{name:26} {}", v.verdict);
    }

    let candidates = [LatticeVector::zero(2), LatticeVector::from_ints(&[0, 1]).unwrap()];
    let dominator = DecreaseCert {
        z: noise.z.clone(),
        k: noise.k.clone(),
        pair: noise.pair,
    };
    let verdicts = class_membership(&noise.x, &dominator, &candidates, &opts);
    for (c, v) in candidates.iter().zip(verdicts) {
        println!("member with limit {c}: {}", v.verdict);
    }
}
