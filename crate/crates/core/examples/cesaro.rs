//! Deferred Cesàro means and the scalar convergence checks.

use riesz_dstat::corpus::seq;
use riesz_dstat::index_set::DEFAULT_BUDGET;
use riesz_dstat::pair::{DeferredPair, IndexRule};
use riesz_dstat::rational::{self, rat};
use riesz_dstat::sequence::{cesaro_mean, deferred_cesaro, deferred_stat_check_real, strong_dpq_check, LowerBound};

fn main() {
    let identity = seq(&[("ALL", &["n"])]);
    println!("Cesàro mean of k at n = 9: {}", cesaro_mean(&identity, 9).unwrap());

    let pair = DeferredPair::new(IndexRule::new(2, 0), IndexRule::new(4, 0)).unwrap();
    for n in [1, 10, 1000] {
        let m = deferred_cesaro(&identity, &pair, n, DEFAULT_BUDGET).unwrap();
        println!("D_(2n,4n) of k at n = {n}: {}", rational::canonical(&m));
    }

    // 1 off the squares, 1/n on them
    let h = seq(&[("POW(2)", &["1/n"]), ("ALL", &["1"])]);
    let natural = DeferredPair::natural();
    let stat = deferred_stat_check_real(&h, &rat(1, 1), &rat(1, 10), &natural, 1_000_000, DEFAULT_BUDGET).unwrap();
    println!("statistical limit 1: {} (exceedance density {})", stat.verdict, stat.density);
    let strong = strong_dpq_check(&h, &rat(1, 1), &natural, 1_000_000, &rat(1, 100), DEFAULT_BUDGET).unwrap();
    println!("strong limit 1: {}", strong.verdict);
    let strong0 = strong_dpq_check(&h, &rat(0, 1), &natural, 1_000_000, &rat(1, 100), DEFAULT_BUDGET).unwrap();
    let bound = match strong0.lower_bound {
        Some(LowerBound::Finite(b)) => rational::canonical(&b),
        Some(LowerBound::Infinite) => "infinite".into(),
        None => "none".into(),
    };
    println!("strong limit 0: {} (liminf of the mean is at least {bound})", strong0.verdict);
}
