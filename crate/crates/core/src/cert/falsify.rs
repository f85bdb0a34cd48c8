//! Bounded falsification against a fixed family of dominators.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{density_json, theorems::brief, CheckOptions};
use crate::lattice::LatticeVector;
use crate::pair::{self, DeferredPair, DensityResult};
use crate::rational;
use crate::sequence::RuleSequence;
use crate::term::Term;

/// `(c, e)` for the dominators `c / n^e`, `c ∈ 1..=10`, `e ∈ 1..=3`.
pub fn whitelist() -> Vec<(u32, u32)> {
    (1..=3).flat_map(|e| (1..=10).map(move |c| (c, e))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FalsifyEntry {
    pub c: u32,
    pub e: u32,
    /// Density of `{n : |x_n − limit| ≰ (c/n^e, ..., c/n^e)}`.
    pub violation_density: DensityResult,
    pub violation_set: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FalsifyReport {
    pub pair: DeferredPair,
    pub entries: Vec<FalsifyEntry>,
}

impl FalsifyReport {
    /// Every whitelisted dominator is violated on a set of density one, so
    /// no density-one `K` can carry the domination.
    pub fn all_density_one(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(&e.violation_density, DensityResult::Exact(d) if *d == rational::int(1)))
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "dominator": format!("{}/n^{}", e.c, e.e),
                    "violation_density": density_json(&e.violation_density),
                    "violation_set": e.violation_set,
                })
            })
            .collect();
        json!({
            "mode": "bounded falsification over the c/n^e whitelist",
            "pair": self.pair.to_string(),
            "entries": entries,
            "all_violation_densities_one": self.all_density_one(),
        })
    }
}

/// Densities of the domination-violation sets for every whitelisted dominator.
pub fn falsify_whitelist(
    x: &RuleSequence,
    limit: &LatticeVector,
    pair: &DeferredPair,
    opts: &CheckOptions,
) -> FalsifyReport {
    let entries = whitelist()
        .into_par_iter()
        .map(|(c, e)| {
            let term = Term::inverse_power(rational::int(i64::from(c)), e as i32);
            let z = RuleSequence::single(vec![term; x.dim()]).expect("dim >= 1");
            let (violation_density, violation_set) = match x.domination_violations(limit, &z) {
                Ok(v) => {
                    let d = pair::deferred_density(&v, pair, opts.n_max, opts.budget)
                        .unwrap_or_else(|err| DensityResult::Inconclusive(err.to_string()));
                    (d, brief(&v))
                }
                Err(err) => (DensityResult::Inconclusive(err.to_string()), String::new()),
            };
            FalsifyEntry {
                c,
                e,
                violation_density,
                violation_set,
            }
        })
        .collect();
    FalsifyReport { pair: *pair, entries }
}
