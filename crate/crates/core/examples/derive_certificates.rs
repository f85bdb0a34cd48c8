//! Building certificates for linear combinations, lattice operations and
//! lifted order convergence, then checking them from scratch.

use riesz_dstat::cert::{
    check_dstat_order_conv, check_order_conv, derive_lattice_cert, derive_linear_cert, lift, CheckOptions,
    DStatOrderCert, LatticeOp, OrderConvCert,
};
use riesz_dstat::corpus::{self, seq};
use riesz_dstat::index_set::IndexSet;
use riesz_dstat::lattice::LatticeVector;
use riesz_dstat::pair::{DeferredPair, IndexRule};
use riesz_dstat::rational::rat;

fn main() {
    let opts = CheckOptions::default();
    let a = corpus::cube_noise_cert();
    let b = DStatOrderCert::new(
        seq(&[("ALL", &["-1 + 1/n", "2 - 1/n"])]),
        LatticeVector::from_ints(&[-1, 2]).unwrap(),
        seq(&[("ALL", &["1/n", "1/n"])]),
        IndexSet::All,
        DeferredPair::natural(),
    )
    .unwrap();

    let d = derive_linear_cert(&a, &b, &rat(2, 1), &rat(-1, 2)).unwrap();
    println!("2x - y/2 -> {}: {}", d.limit, check_dstat_order_conv(&d, &opts).verdict);
    for op in LatticeOp::ALL {
        let d = derive_lattice_cert(&a, Some(&b), op).unwrap();
        println!("{op:>4} -> {}: {}", d.limit, check_dstat_order_conv(&d, &opts).verdict);
    }

    let order = OrderConvCert::new(
        seq(&[("ALL", &["1/n", "1/n^2"])]),
        LatticeVector::zero(2),
        seq(&[("ALL", &["1/n", "1/n"])]),
    )
    .unwrap();
    println!("order convergence: {}", check_order_conv(&order, &opts).verdict);
    let pair = DeferredPair::new(IndexRule::new(1, 0), IndexRule::new(3, 1)).unwrap();
    let lifted = lift(&order, pair);
    println!("lifted to {pair}: {}", check_dstat_order_conv(&lifted, &opts).verdict);
}
