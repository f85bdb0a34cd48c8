use num_bigint::BigInt;
use proptest::prelude::*;
use riesz_dstat::index_set::{count_window, natural_density, oracle_count, IndexSet};
use riesz_dstat::lattice::LatticeVector;
use riesz_dstat::pair::{self, DeferredPair, IndexRule};
use riesz_dstat::rational::{self, Rational};
use riesz_dstat::sequence::{deferred_cesaro, RuleSequence};
use riesz_dstat::spec::parse_spec;
use riesz_dstat::term::Term;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| rational::rat(n, d))
}

fn vectors(dim: usize, count: usize) -> impl Strategy<Value = Vec<LatticeVector>> {
    prop::collection::vec(
        prop::collection::vec(small_rational(), dim).prop_map(|c| LatticeVector::new(c).unwrap()),
        count,
    )
}

fn index_set() -> impl Strategy<Value = IndexSet> {
    let leaf = prop_oneof![
        Just(IndexSet::All),
        Just(IndexSet::Empty),
        prop::collection::vec(1u64..500, 1..5).prop_map(|xs| IndexSet::finite(xs).unwrap()),
        (1u64..=10).prop_flat_map(|c| (Just(c), 0..c)).prop_map(|(c, r)| IndexSet::ap(c, r).unwrap()),
        (2u32..=4).prop_map(|e| IndexSet::pow(e).unwrap()),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(IndexSet::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
        ]
    })
}

fn valid_pair() -> impl Strategy<Value = DeferredPair> {
    (0u64..3, 0u64..4, 0u64..3, 0u64..4)
        .prop_map(|(a, b, da, db)| DeferredPair::new(IndexRule::new(a, b), IndexRule::new(a + da + 1, b + db)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn riesz_decomposition(dim in 1usize..=5, seed in vectors(5, 2)) {
        let trim = |v: &LatticeVector| LatticeVector::new(v.coords()[..dim].to_vec()).unwrap();
        let (x, y) = (trim(&seed[0]), trim(&seed[1]));
        let p = x.parts();
        prop_assert_eq!(x.join(&y).unwrap().add(&x.meet(&y).unwrap()).unwrap(), x.add(&y).unwrap());
        prop_assert_eq!(p.pos.sub(&p.neg).unwrap(), x.clone());
        prop_assert_eq!(p.pos.meet(&p.neg).unwrap(), LatticeVector::zero(dim));
        prop_assert!(x.meet(&y).unwrap().le(&x).unwrap() && x.le(&x.join(&y).unwrap()).unwrap());
    }

    #[test]
    fn window_counts_match_the_oracle(set in index_set(), lo in 0u64..3_000, width in 1u64..3_000) {
        let fast = count_window(&set, lo, lo + width, u64::MAX).unwrap();
        prop_assert_eq!(fast, oracle_count(&set, lo, lo + width).unwrap());
    }

    #[test]
    fn set_syntax_round_trips(set in index_set()) {
        prop_assert_eq!(set.to_string().parse::<IndexSet>().unwrap(), set);
    }

    #[test]
    fn exact_densities_agree(set in index_set(), pair in valid_pair()) {
        if pair.width_slope() > 0 {
            let d = pair::deferred_density(&set, &pair, 1 << 16, u64::MAX).unwrap();
            prop_assert_eq!(d.exact(), Some(&natural_density(&set)));
        }
    }

    #[test]
    fn cesaro_is_direct_summation(a in -5i64..=5, b in -9i64..=9, pair in valid_pair(), n in 1u64..300) {
        let t = Term::parse(&format!("{a}n + ({b})")).unwrap();
        let x = RuleSequence::single(vec![t.clone()]).unwrap();
        let (lo, hi) = pair.window(n);
        let sum: Rational = (lo + 1..=hi).map(|k| t.eval(k)).sum();
        let direct = sum / Rational::from_integer(BigInt::from(hi - lo));
        prop_assert_eq!(deferred_cesaro(&x, &pair, n, u64::MAX).unwrap(), direct);
    }

    #[test]
    fn specs_round_trip(set in index_set(), pair in valid_pair(), k in 1u64..50) {
        let text = format!(
            "PAIR w {pair}\nSET s = {set}\nSEQ x = (1/n, {k}) if s; (n, -1/{k})\n\
             TASK d = density set=NOT(s) pair=w\nTASK e = eval seq=x n={k}\n"
        );
        let spec = parse_spec(&text).unwrap();
        prop_assert_eq!(parse_spec(&spec.to_string()).unwrap(), spec);
    }
}
