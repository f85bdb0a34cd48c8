use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use super::{CertError, DStatOrderCert, OrderConvCert};
use crate::index_set::IndexSet;
use crate::pair::DeferredPair;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Join,
    Meet,
    Pos,
    Neg,
    Abs,
}

impl LatticeOp {
    pub const ALL: [LatticeOp; 5] = [LatticeOp::Join, LatticeOp::Meet, LatticeOp::Pos, LatticeOp::Neg, LatticeOp::Abs];

    pub fn as_str(&self) -> &'static str {
        match self {
            LatticeOp::Join => "join",
            LatticeOp::Meet => "meet",
            LatticeOp::Pos => "pos",
            LatticeOp::Neg => "neg",
            LatticeOp::Abs => "abs",
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, LatticeOp::Join | LatticeOp::Meet)
    }
}

impl fmt::Display for LatticeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LatticeOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LatticeOp::ALL
            .into_iter()
            .find(|op| op.as_str() == s)
            .ok_or_else(|| format!("unknown lattice operation `{s}` (expected join, meet, pos, neg or abs)"))
    }
}

fn compatible(a: &DStatOrderCert, b: &DStatOrderCert) -> Result<(), CertError> {
    if a.pair != b.pair {
        return Err(CertError::PairMismatch {
            left: a.pair.to_string(),
            right: b.pair.to_string(),
        });
    }
    if a.dim() != b.dim() {
        return Err(CertError::DimensionMismatch {
            what: "second certificate",
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Certificate for `λx + μy → λa + μb` with dominator `|λ|z + |μ|t` on `K ∩ M`.
pub fn derive_linear_cert(
    a: &DStatOrderCert,
    b: &DStatOrderCert,
    lambda: &Rational,
    mu: &Rational,
) -> Result<DStatOrderCert, CertError> {
    compatible(a, b)?;
    let x = a.x.linear(lambda, &b.x, mu)?;
    let limit = a.limit.scale(lambda).add(&b.limit.scale(mu))?;
    let z = a.z.linear(&lambda.abs(), &b.z, &mu.abs())?;
    DStatOrderCert::with_zset(
        x,
        limit,
        z,
        a.k.clone().and(b.k.clone()),
        a.zset.clone().and(b.zset.clone()),
        a.pair,
    )
}

/// Certificate for a lattice operation applied to convergent sequences.
/// Binary operations use the dominator `z + t` on `K ∩ M`; unary ones keep
/// the first certificate's dominator and set.
pub fn derive_lattice_cert(
    a: &DStatOrderCert,
    b: Option<&DStatOrderCert>,
    op: LatticeOp,
) -> Result<DStatOrderCert, CertError> {
    if op.is_binary() {
        let b = b.ok_or(CertError::MissingOperand(op.as_str()))?;
        compatible(a, b)?;
        let (x, limit) = match op {
            LatticeOp::Join => (a.x.join(&b.x)?, a.limit.join(&b.limit)?),
            _ => (a.x.meet(&b.x)?, a.limit.meet(&b.limit)?),
        };
        return DStatOrderCert::with_zset(
            x,
            limit,
            a.z.add(&b.z)?,
            a.k.clone().and(b.k.clone()),
            a.zset.clone().and(b.zset.clone()),
            a.pair,
        );
    }
    let (x, limit) = match op {
        LatticeOp::Pos => (a.x.pos(), a.limit.pos()),
        LatticeOp::Neg => (a.x.neg_part(), a.limit.neg_part()),
        _ => (a.x.abs(), a.limit.abs()),
    };
    DStatOrderCert::with_zset(x, limit, a.z.clone(), a.k.clone(), a.zset.clone(), a.pair)
}

/// An order convergent sequence is deferred statistically order convergent
/// under every pair, with `K = ALL`.
pub fn lift(cert: &OrderConvCert, pair: DeferredPair) -> DStatOrderCert {
    DStatOrderCert::with_zset(
        cert.x.clone(),
        cert.limit.clone(),
        cert.y.clone(),
        IndexSet::All,
        IndexSet::All,
        pair,
    )
    .expect("dimensions checked when the order certificate was built")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::{check_dstat_order_conv, CheckOptions};
    use crate::corpus;
    use crate::lattice::LatticeVector;
    use crate::rational::{int, rat};
    use crate::verdict::Verdict;

    fn opts() -> CheckOptions {
        CheckOptions {
            prefix_n: 500,
            ..CheckOptions::default()
        }
    }

    #[test]
    fn linear_combinations_reverify() {
        let a = corpus::cube_noise_cert();
        let b = corpus::cube_self_cert();
        for (l, m) in [(int(1), int(1)), (int(0), int(0)), (int(1), int(-1)), (rat(-3, 2), rat(2, 5))] {
            let d = derive_linear_cert(&a, &b, &l, &m).unwrap();
            let v = check_dstat_order_conv(&d, &opts());
            assert_eq!(v.verdict, Verdict::Verified, "{l} {m}: {:?}", v.evidence);
        }
        let zero = derive_linear_cert(&a, &a, &int(1), &int(-1)).unwrap();
        assert_eq!(zero.limit, LatticeVector::zero(2));
        assert!(zero.x.eval(8).is_zero() && zero.x.eval(9).is_zero());
    }

    #[test]
    fn lattice_operations_reverify() {
        let a = corpus::cube_noise_cert();
        let b = corpus::cube_self_cert();
        for op in LatticeOp::ALL {
            let d = derive_lattice_cert(&a, Some(&b), op).unwrap();
            let v = check_dstat_order_conv(&d, &opts());
            assert_eq!(v.verdict, Verdict::Verified, "{op}: {:?}", v.evidence);
        }
        assert!(matches!(
            derive_lattice_cert(&a, None, LatticeOp::Join),
            Err(CertError::MissingOperand("join"))
        ));
    }

    #[test]
    fn positive_part_of_limit() {
        let x = corpus::seq(&[("ALL", &["-1 + 1/n", "2 - 1/n"])]);
        let z = corpus::seq(&[("ALL", &["1/n", "1/n"])]);
        let limit = LatticeVector::from_ints(&[-1, 2]).unwrap();
        let a = DStatOrderCert::new(x, limit, z, IndexSet::All, DeferredPair::natural()).unwrap();
        let d = derive_lattice_cert(&a, None, LatticeOp::Pos).unwrap();
        assert_eq!(d.limit, LatticeVector::from_ints(&[0, 2]).unwrap());
        assert!(check_dstat_order_conv(&d, &opts()).is_verified());
    }
}
