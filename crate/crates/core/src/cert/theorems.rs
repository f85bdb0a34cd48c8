//! Instance checks for the comparison, transfer and structure results about
//! deferred statistical order convergence.

use num_traits::Zero;

use super::{
    check_decrease, check_dstat_order_conv, check_order_conv, emptiness, eventual_piece, CheckOptions, CheckVerdict,
    DStatOrderCert, DecreaseCert, Emptiness, OrderConvCert, Outcome, Witness,
};
use crate::index_set::IndexSet;
use crate::lattice::{LatticeVector, OrderIdeal};
use crate::pair::{self, DeferredPair, DensityResult};
use crate::rational;
use crate::sequence::RuleSequence;
use crate::verdict::Verdict;

/// Shortened rendering of a possibly large set for evidence lines.
pub(crate) fn brief(set: &IndexSet) -> String {
    const MAX: usize = 160;
    let s = set.to_string();
    if s.len() <= MAX {
        s
    } else {
        let cut = (0..=MAX).rev().find(|&i| s.is_char_boundary(i)).unwrap_or(0);
        format!("{}... ({} chars)", &s[..cut], s.len())
    }
}

/// Runs the certificate checker and turns anything but `verified` into a
/// failed precondition.
fn require_verified(label: &str, cert: &DStatOrderCert, opts: &CheckOptions) -> Result<Vec<String>, CheckVerdict> {
    let v = check_dstat_order_conv(cert, opts);
    let evidence: Vec<String> = v.evidence.iter().map(|e| format!("{label}: {e}")).collect();
    if v.is_verified() {
        Ok(vec![format!("{label} certificate verified")])
    } else {
        Err(CheckVerdict::precondition(
            format!("{label} certificate is {}, not verified", v.verdict),
            evidence,
            v.witness,
        ))
    }
}

/// Two limits of one sequence must coincide: on `K ∩ M`,
/// `|a − b| <= z_j + t_j` and the right side tends to zero.
pub fn uniqueness_probe(a: &DStatOrderCert, b: &DStatOrderCert, opts: &CheckOptions) -> CheckVerdict {
    if a.x != b.x {
        return CheckVerdict::precondition("the certificates concern different sequences", vec![], None);
    }
    let mut out = Outcome::default();
    for (label, cert) in [("first", a), ("second", b)] {
        let v = check_dstat_order_conv(cert, opts);
        out.note(format!("{label} certificate: {}", v.verdict));
    }
    if a.limit == b.limit {
        out.note(format!("limits coincide: {}", a.limit));
        return out.finish();
    }
    let gap = match a.limit.sub(&b.limit) {
        Ok(d) => d.abs(),
        Err(e) => return CheckVerdict::precondition(e.to_string(), vec![], None),
    };
    out.note(format!("limits differ: |{} − {}| = {gap}", a.limit, b.limit));
    let both = a.k.clone().and(b.k.clone());
    let witness = match a.z.add(&b.z) {
        Ok(sum) => {
            let sets = RuleSequence::constant(&gap)
                .not_le_set(&sum)
                .map(|bad| emptiness(&bad.and(both.clone()), opts.budget));
            match sets {
                Ok(Emptiness::Inhabited(Some(j))) => Some(j),
                _ => (1..=opts.prefix_n).find(|&j| both.contains(j) && !gap.le(&sum.eval(j)).expect("same dim")),
            }
        }
        Err(_) => None,
    };
    match witness {
        Some(j) => {
            let bound = a.z.eval(j).add(&b.z.eval(j)).expect("same dim");
            let detail = format!("j = {j} ∈ K ∩ M: |a − b| = {gap} ≰ z_j + t_j = {bound}");
            out.refute(
                Witness::Index {
                    n: j,
                    coordinate: None,
                    detail: detail.clone(),
                },
                detail,
            );
        }
        None => out.unknown("distinct limits, but no index in K ∩ M exposes the contradiction"),
    }
    out.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Down,
    Up,
}

/// Whether `x` is monotone on ℕ in the coordinatewise order.
fn monotone_direction(x: &RuleSequence, opts: &CheckOptions) -> Result<Direction, CheckVerdict> {
    let mut tail = [None, None];
    if let Some((i, last)) = eventual_piece(x, &IndexSet::All, opts.budget) {
        let classes: Vec<_> = x.pieces()[i].terms.iter().map(|t| t.tail_class().monotone).collect();
        let down = classes.iter().map(|m| m.nonincreasing_from()).collect::<Option<Vec<_>>>();
        let up = classes.iter().map(|m| m.nondecreasing_from()).collect::<Option<Vec<_>>>();
        tail[0] = down.map(|f| f.into_iter().fold(last + 1, u64::max));
        tail[1] = up.map(|f| f.into_iter().fold(last + 1, u64::max));
    }
    let scan_to = tail.iter().flatten().copied().fold(opts.prefix_n, u64::max);
    let mut ok = [true, true];
    let mut broke = [0u64, 0u64];
    let mut prev = x.eval(1);
    for n in 1..scan_to {
        let next = x.eval(n + 1);
        if ok[0] && !next.le(&prev).expect("same dim") {
            ok[0] = false;
            broke[0] = n;
        }
        if ok[1] && !prev.le(&next).expect("same dim") {
            ok[1] = false;
            broke[1] = n;
        }
        if !ok[0] && !ok[1] {
            let detail = format!(
                "x increases somewhere between n = {} and {}, and decreases between n = {} and {}",
                broke[0],
                broke[0] + 1,
                broke[1],
                broke[1] + 1
            );
            return Err(CheckVerdict::precondition(
                "x is not monotone",
                vec![],
                Some(Witness::Index {
                    n: broke[0].max(broke[1]),
                    coordinate: None,
                    detail,
                }),
            ));
        }
        prev = next;
    }
    if ok[0] && tail[0].is_some() {
        Ok(Direction::Down)
    } else if ok[1] && tail[1].is_some() {
        Ok(Direction::Up)
    } else {
        Err(CheckVerdict {
            verdict: Verdict::Inconclusive,
            witness: None,
            evidence: vec![format!("x is monotone up to {scan_to}, but its tail is not decided")],
        })
    }
}

/// A monotone deferred statistically order convergent sequence is order
/// convergent, dominated by `|x_n − limit|`.
pub fn monotone_order_check(cert: &DStatOrderCert, opts: &CheckOptions) -> CheckVerdict {
    let mut evidence = match require_verified("input", cert, opts) {
        Ok(e) => e,
        Err(v) => return v,
    };
    let direction = match monotone_direction(&cert.x, opts) {
        Ok(d) => d,
        Err(v) => return v,
    };
    evidence.push(format!(
        "x is {} on all of ℕ",
        if direction == Direction::Down { "nonincreasing" } else { "nondecreasing" }
    ));
    let y = match cert.x.sub_vector(&cert.limit) {
        Ok(d) => d.abs(),
        Err(e) => return CheckVerdict::precondition(e.to_string(), evidence, None),
    };
    let order = OrderConvCert::new(cert.x.clone(), cert.limit.clone(), y.clone()).expect("same dim");
    let mut v = check_order_conv(&order, opts);
    evidence.push(format!("dominator y = |x − l| = {y}"));
    evidence.append(&mut v.evidence);
    v.evidence = evidence;
    v
}

/// Restriction to a subsequence whose index set has positive lower density.
pub fn subsequence_check(cert: &DStatOrderCert, kprime: &IndexSet, opts: &CheckOptions) -> CheckVerdict {
    let mut evidence = match require_verified("input", cert, opts) {
        Ok(e) => e,
        Err(v) => return v,
    };
    let inconclusive = |mut evidence: Vec<String>, why: String| {
        evidence.push(why);
        CheckVerdict {
            verdict: Verdict::Inconclusive,
            witness: None,
            evidence,
        }
    };
    let liminf = match pair::deferred_density(kprime, &cert.pair, opts.n_max, opts.budget) {
        Ok(DensityResult::Exact(d)) => d,
        Ok(other) => return inconclusive(evidence, format!("density of K' not exact: {other}")),
        Err(e) => return inconclusive(evidence, e.to_string()),
    };
    if liminf.is_zero() {
        return inconclusive(evidence, "liminf of the windowed density of K' is 0".into());
    }
    evidence.push(format!("liminf density of K' = {}", rational::canonical(&liminf)));
    let violations = match cert.x.domination_violations(&cert.limit, &cert.z) {
        Ok(v) => v.and(kprime.clone()),
        Err(e) => return inconclusive(evidence, e.to_string()),
    };
    match pair::deferred_density(&violations, &cert.pair, opts.n_max, opts.budget) {
        Ok(DensityResult::Exact(d)) if d.is_zero() => {
            evidence.push("violations inside K' have density 0, so their share of K' tends to 0".into());
            CheckVerdict {
                verdict: Verdict::Verified,
                witness: None,
                evidence,
            }
        }
        Ok(d @ (DensityResult::Exact(_) | DensityResult::NoLimit { .. })) => {
            evidence.push(format!("violations inside K' have density {d}"));
            CheckVerdict {
                verdict: Verdict::Refuted,
                witness: Some(Witness::Density {
                    set: brief(&violations),
                    density: d,
                }),
                evidence,
            }
        }
        Ok(d) => inconclusive(evidence, format!("violation density not exact: {d}")),
        Err(e) => inconclusive(evidence, e.to_string()),
    }
}

/// Statistical order convergence implies deferred statistical order
/// convergence when `p_n / (q_n − p_n)` is bounded.
pub fn stat_implies_deferred_check(cert: &DStatOrderCert, target: &DeferredPair, opts: &CheckOptions) -> CheckVerdict {
    if !cert.pair.is_natural() {
        return CheckVerdict::precondition(
            format!("the certificate must use the pair p: 0 q: n, not {}", cert.pair),
            vec![],
            None,
        );
    }
    let mut evidence = match require_verified("statistical", cert, opts) {
        Ok(e) => e,
        Err(v) => return v,
    };
    let ratio = pair::ratio_bounded(target);
    if !ratio.bounded {
        return CheckVerdict::precondition(format!("p_n / (q_n − p_n) is unbounded for {target}"), evidence, None);
    }
    if let Some(sup) = &ratio.sup {
        evidence.push(format!("sup p_n / (q_n − p_n) = {}", rational::canonical(sup)));
    }
    let mut v = check_dstat_order_conv(&cert.with_pair(*target), opts);
    evidence.extend(v.evidence.into_iter().map(|e| format!("re-check under {target}: {e}")));
    v.evidence = evidence;
    v
}

/// A certificate with limit 0 whose sequences live in the ideal `A` is
/// valid in `A` and in the ambient space at once.
pub fn ideal_check(cert: &DStatOrderCert, ideal: &OrderIdeal, opts: &CheckOptions) -> CheckVerdict {
    if let Err(e) = ideal.validate(cert.dim()) {
        return CheckVerdict::precondition(e.to_string(), vec![], None);
    }
    let mut evidence = match require_verified("input", cert, opts) {
        Ok(e) => e,
        Err(v) => return v,
    };
    if !cert.limit.is_zero() {
        return CheckVerdict::precondition(format!("limit {} is not 0", cert.limit), evidence, None);
    }
    let outside: Vec<usize> = (1..=cert.dim()).filter(|&c| !ideal.allows(c)).collect();
    let leaves = |seq: &RuleSequence| {
        seq.pieces()
            .iter()
            .any(|p| outside.iter().any(|&c| !p.terms[c - 1].is_zero()))
    };
    if !leaves(&cert.x) && !leaves(&cert.z) {
        evidence.push("every piece of x and z vanishes off the support; valid in A and in E".into());
        return CheckVerdict {
            verdict: Verdict::Verified,
            witness: None,
            evidence,
        };
    }
    let scan = opts.prefix_n.max(1);
    for n in 1..=scan {
        for (name, seq) in [("x", &cert.x), ("z", &cert.z)] {
            let v = seq.eval(n);
            if let Some(&c) = outside.iter().find(|&&c| !v.coord(c - 1).is_zero()) {
                let detail = format!("{name}_{n} = {v} is nonzero in coordinate {c}, outside the ideal");
                evidence.push(detail.clone());
                return CheckVerdict {
                    verdict: Verdict::Refuted,
                    witness: Some(Witness::Index {
                        n,
                        coordinate: Some(c),
                        detail,
                    }),
                    evidence,
                };
            }
        }
    }
    evidence.push(format!("some piece leaves the ideal, but no index up to {scan} does"));
    CheckVerdict {
        verdict: Verdict::Inconclusive,
        witness: None,
        evidence,
    }
}

/// Membership of `x` in the class of sequences convergent with dominator
/// `z`, tried for each candidate limit with `K` the complement of the
/// violation set.
pub fn class_membership(
    x: &RuleSequence,
    dominator: &DecreaseCert,
    candidates: &[LatticeVector],
    opts: &CheckOptions,
) -> Vec<CheckVerdict> {
    let dec = check_decrease(dominator, opts);
    if !dec.is_verified() {
        let v = CheckVerdict::precondition(
            format!("the dominator's decrease certificate is {}", dec.verdict),
            dec.evidence,
            dec.witness,
        );
        return vec![v; candidates.len()];
    }
    candidates
        .iter()
        .map(|limit| {
            let violations = match x.domination_violations(limit, &dominator.z) {
                Ok(v) => v,
                Err(e) => {
                    return CheckVerdict {
                        verdict: Verdict::Inconclusive,
                        witness: None,
                        evidence: vec![format!("violation set not expressible: {e}")],
                    }
                }
            };
            let cert = match DStatOrderCert::with_zset(
                x.clone(),
                limit.clone(),
                dominator.z.clone(),
                violations.clone().not(),
                dominator.k.clone(),
                dominator.pair,
            ) {
                Ok(c) => c,
                Err(e) => return CheckVerdict::precondition(e.to_string(), vec![], None),
            };
            let mut v = check_dstat_order_conv(&cert, opts);
            v.evidence.insert(0, format!("candidate {limit}: K = complement of {}", brief(&violations)));
            v
        })
        .collect()
}

/// Sequences that agree off a set of density zero share their limits.
pub fn equal_mod_null_transfer(x: &RuleSequence, cert_y: &DStatOrderCert, opts: &CheckOptions) -> CheckVerdict {
    let mut out = Outcome::default();
    match require_verified("y", cert_y, opts) {
        Ok(e) => e.into_iter().for_each(|s| out.note(s)),
        Err(v) => return v,
    }
    let disagreement = match x.disagreement_set(&cert_y.x) {
        Ok(d) => d,
        Err(e) => {
            out.unknown(format!("disagreement set not expressible: {e}"));
            return out.finish();
        }
    };
    match pair::deferred_density(&disagreement, &cert_y.pair, opts.n_max, opts.budget) {
        Ok(DensityResult::Exact(d)) if d.is_zero() => {
            out.note(format!("disagreement set {} has density 0", brief(&disagreement)))
        }
        Ok(d @ (DensityResult::Exact(_) | DensityResult::NoLimit { .. })) => {
            let msg = format!("disagreement density is {d}");
            out.refute(
                Witness::Density {
                    set: brief(&disagreement),
                    density: d,
                },
                msg,
            );
            return out.finish();
        }
        Ok(d) => {
            out.unknown(format!("disagreement density not exact: {d}"));
            return out.finish();
        }
        Err(e) => {
            out.unknown(e.to_string());
            return out.finish();
        }
    }
    let k = cert_y.k.clone().minus(disagreement);
    let transferred = DStatOrderCert::with_zset(
        x.clone(),
        cert_y.limit.clone(),
        cert_y.z.clone(),
        k,
        cert_y.zset.clone(),
        cert_y.pair,
    )
    .expect("same dim as y");
    out.absorb("transferred", check_dstat_order_conv(&transferred, opts));
    out.finish()
}

/// `x_n >= y_n` for all `n` forces `lim x >= lim y`.
pub fn order_preservation_check(a: &DStatOrderCert, b: &DStatOrderCert, opts: &CheckOptions) -> CheckVerdict {
    let mut evidence = Vec::new();
    for (label, cert) in [("first", a), ("second", b)] {
        match require_verified(label, cert, opts) {
            Ok(mut e) => evidence.append(&mut e),
            Err(v) => return v,
        }
    }
    let premise = match b.x.not_le_set(&a.x) {
        Ok(bad) => emptiness(&bad, opts.budget),
        Err(_) => Emptiness::Unknown,
    };
    match premise {
        Emptiness::Empty => evidence.push("x_n >= y_n for every n (exact)".into()),
        Emptiness::Inhabited(n) => {
            let n = n.unwrap_or(0);
            let detail = if n > 0 {
                format!("x_{n} = {} but y_{n} = {}", a.x.eval(n), b.x.eval(n))
            } else {
                "x_n >= y_n fails beyond the witness scan".into()
            };
            return CheckVerdict::precondition(
                "pointwise premise x_n >= y_n fails",
                evidence,
                Some(Witness::Index {
                    n,
                    coordinate: None,
                    detail,
                }),
            );
        }
        Emptiness::Unknown => {
            evidence.push("pointwise premise undecided".into());
            return CheckVerdict {
                verdict: Verdict::Inconclusive,
                witness: None,
                evidence,
            };
        }
    }
    match b.limit.first_exceeding(&a.limit) {
        Ok(None) => {
            evidence.push(format!("limits ordered: {} >= {}", a.limit, b.limit));
            CheckVerdict {
                verdict: Verdict::Verified,
                witness: None,
                evidence,
            }
        }
        Ok(Some(c)) => {
            evidence.push(format!("limit {} is not >= {}", a.limit, b.limit));
            CheckVerdict {
                verdict: Verdict::Refuted,
                witness: Some(Witness::Limit {
                    coordinate: c + 1,
                    limit: rational::canonical(a.limit.coord(c)),
                }),
                evidence,
            }
        }
        Err(e) => CheckVerdict::precondition(e.to_string(), evidence, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn opts() -> CheckOptions {
        CheckOptions {
            prefix_n: 500,
            ..CheckOptions::default()
        }
    }

    fn natural(x: RuleSequence, limit: &[i64], z: RuleSequence) -> DStatOrderCert {
        let limit = LatticeVector::from_ints(limit).unwrap();
        DStatOrderCert::new(x, limit, z, IndexSet::All, DeferredPair::natural()).unwrap()
    }

    #[test]
    fn uniqueness() {
        let a = corpus::cube_noise_cert();
        assert!(uniqueness_probe(&a, &a, &opts()).is_verified());
        let mut b = a.clone();
        b.limit = LatticeVector::from_ints(&[0, 1]).unwrap();
        let v = uniqueness_probe(&a, &b, &opts());
        assert_eq!(v.verdict, Verdict::Refuted);
        let Some(Witness::Index { n, .. }) = v.witness else { panic!() };
        assert!(a.k.contains(n) && b.k.contains(n));
    }

    #[test]
    fn monotone_sequences() {
        let z = corpus::seq(&[("ALL", &["1/n", "1/n"])]);
        let down = natural(z.clone(), &[0, 0], z.clone());
        assert!(monotone_order_check(&down, &opts()).is_verified());
        let up = natural(corpus::seq(&[("ALL", &["1 - 1/n", "0"])]), &[1, 0], z.clone());
        assert!(monotone_order_check(&up, &opts()).is_verified());
        let parity = corpus::seq(&[("AP(2,0)", &["1/n", "0"]), ("ALL", &["-1/n", "0"])]);
        let osc = natural(parity, &[0, 0], z);
        assert_eq!(monotone_order_check(&osc, &opts()).verdict, Verdict::PreconditionFailed);
    }

    #[test]
    fn subsequences() {
        let cert = corpus::cube_noise_cert();
        let v = subsequence_check(&cert, &"AP(2,0)".parse().unwrap(), &opts());
        assert!(v.is_verified(), "{:?}", v.evidence);
        assert!(v.evidence.iter().any(|e| e.contains("= 1/2")));
        assert!(subsequence_check(&cert, &IndexSet::All, &opts()).is_verified());
        let v = subsequence_check(&cert, &"POW(3)".parse().unwrap(), &opts());
        assert_eq!(v.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn retargeting() {
        let cert = corpus::cube_self_cert();
        for (p, q, expected) in [
            ("2n", "4n", Verdict::Verified),
            ("0", "2n", Verdict::Verified),
            ("n", "n+1", Verdict::PreconditionFailed),
        ] {
            let target = DeferredPair::new(p.parse().unwrap(), q.parse().unwrap()).unwrap();
            assert_eq!(stat_implies_deferred_check(&cert, &target, &opts()).verdict, expected, "{p} {q}");
        }
    }

    #[test]
    fn ideals() {
        let cert = corpus::cube_self_cert();
        assert!(ideal_check(&cert, &OrderIdeal::new([2]), &opts()).is_verified());
        assert!(ideal_check(&cert, &OrderIdeal::full(2), &opts()).is_verified());
        let v = ideal_check(&cert, &OrderIdeal::new([1]), &opts());
        assert_eq!(v.verdict, Verdict::Refuted);
        assert!(matches!(
            v.witness,
            Some(Witness::Index {
                n: 1,
                coordinate: Some(2),
                ..
            })
        ));
    }

    #[test]
    fn membership() {
        let z = corpus::seq(&[("ALL", &["1/n", "1/n"])]);
        let dec = DecreaseCert {
            z,
            k: IndexSet::All,
            pair: DeferredPair::natural(),
        };
        let half = corpus::seq(&[("ALL", &["1/(2n)", "0"])]);
        let zero = LatticeVector::zero(2);
        assert!(class_membership(&half, &dec, &[zero.clone()], &opts())[0].is_verified());
        let five = corpus::seq(&[("ALL", &["5", "5"])]);
        let v = class_membership(&five, &dec, &[LatticeVector::from_ints(&[5, 5]).unwrap(), zero], &opts());
        assert!(v[0].is_verified());
        assert_eq!(v[1].verdict, Verdict::Refuted);
    }

    #[test]
    fn transfer_modulo_null_sets() {
        let z = corpus::seq(&[("ALL", &["1/n", "1/n"])]);
        let y = corpus::seq(&[("ALL", &["1/n", "0"])]);
        let cert = natural(y.clone(), &[0, 0], z);
        let x = corpus::seq(&[("POW(3)", &["7", "7"]), ("ALL", &["1/n", "0"])]);
        assert!(equal_mod_null_transfer(&x, &cert, &opts()).is_verified());
        assert!(equal_mod_null_transfer(&y, &cert, &opts()).is_verified());
        let evens = corpus::seq(&[("AP(2,0)", &["7", "7"]), ("ALL", &["1/n", "0"])]);
        let v = equal_mod_null_transfer(&evens, &cert, &opts());
        assert_eq!(v.verdict, Verdict::Refuted);
        assert!(matches!(
            v.witness,
            Some(Witness::Density { density: DensityResult::Exact(ref d), .. }) if *d == crate::rational::rat(1, 2)
        ));
    }

    #[test]
    fn order_preservation() {
        let z = corpus::seq(&[("ALL", &["1/n", "1/n"])]);
        let a = natural(z.clone(), &[0, 0], z.clone());
        let b = natural(corpus::seq(&[("ALL", &["0", "0"])]), &[0, 0], z.clone());
        assert!(order_preservation_check(&a, &b, &opts()).is_verified());
        let a = natural(corpus::seq(&[("ALL", &["1 + 1/n", "0"])]), &[1, 0], z.clone());
        let b = natural(corpus::seq(&[("ALL", &["1", "0"])]), &[1, 0], z.clone());
        assert!(order_preservation_check(&a, &b, &opts()).is_verified());
        let v = order_preservation_check(&b, &a, &opts());
        assert_eq!(v.verdict, Verdict::PreconditionFailed);
    }
}
