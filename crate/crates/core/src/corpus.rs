//! Worked examples and a seeded generator of certificates known to verify.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::cert::{falsify_whitelist, CheckOptions, DStatOrderCert, DecreaseCert, FalsifyReport};
use crate::index_set::IndexSet;
use crate::lattice::{LatticeVector, OrderIdeal};
use crate::pair::{DeferredPair, IndexRule, PairError};
use crate::rational::{self, Rational};
use crate::sequence::{Piece, RuleSequence};
use crate::term::Term;

/// Builds a sequence from `(guard, terms)` rows; the last guard should be `ALL`.
///
/// Panics on malformed input, so it is meant for fixed literals.
pub fn seq(rows: &[(&str, &[&str])]) -> RuleSequence {
    let pieces = rows
        .iter()
        .map(|(guard, terms)| {
            let guard: IndexSet = guard.parse().unwrap_or_else(|e| panic!("bad set {guard}: {e}"));
            let terms = terms
                .iter()
                .map(|t| Term::parse(t).unwrap_or_else(|e| panic!("bad term {t}: {e}")))
                .collect();
            Piece::new(guard, terms)
        })
        .collect();
    RuleSequence::new(pieces).expect("well-formed literal sequence")
}

fn not_cubes() -> IndexSet {
    IndexSet::pow(3).expect("valid exponent").not()
}

/// `(0, n²)` on cubes and `(0, 1/n²)` elsewhere.
pub fn cube_z() -> RuleSequence {
    seq(&[("POW(3)", &["0", "n^2"]), ("ALL", &["0", "1/n^2"])])
}

/// The cube sequence decreases to zero off the cubes under `(0, n)`.
pub fn cube_decrease() -> DecreaseCert {
    DecreaseCert {
        z: cube_z(),
        k: not_cubes(),
        pair: DeferredPair::natural(),
    }
}

/// The cube sequence converging to zero, dominated by itself.
pub fn cube_self_cert() -> DStatOrderCert {
    DStatOrderCert::new(cube_z(), LatticeVector::zero(2), cube_z(), not_cubes(), DeferredPair::natural())
        .expect("dims agree")
}

/// `(0, n)` on cubes and `(0, 1/n)` elsewhere.
pub fn cube_noise_x() -> RuleSequence {
    seq(&[("POW(3)", &["0", "n"]), ("ALL", &["0", "1/n"])])
}

/// `(0, n²)` on cubes and `(0, 2/n)` elsewhere.
pub fn cube_noise_z() -> RuleSequence {
    seq(&[("POW(3)", &["0", "n^2"]), ("ALL", &["0", "2/n"])])
}

pub fn cube_noise_cert() -> DStatOrderCert {
    DStatOrderCert::new(
        cube_noise_x(),
        LatticeVector::zero(2),
        cube_noise_z(),
        not_cubes(),
        DeferredPair::natural(),
    )
    .expect("dims agree")
}

/// `(0, (n+1)/2)` for odd `n`, `(0, −n/2)` for even `n`.
pub fn alternating_x() -> RuleSequence {
    seq(&[("AP(2,1)", &["0", "(n+1)/2"]), ("ALL", &["0", "-n/2"])])
}

/// The pair as printed for the alternating example, `p = 4n`, `q = 2n`.
pub fn printed_pair() -> Result<DeferredPair, PairError> {
    DeferredPair::new(IndexRule::new(4, 0), IndexRule::new(2, 0))
}

pub fn swapped_pair() -> DeferredPair {
    DeferredPair::new(IndexRule::new(2, 0), IndexRule::new(4, 0)).expect("2n < 4n")
}

/// The alternating sequence with limit 0 and the whitelist dominator
/// `c/n^e` in both coordinates, `K = ALL`, under the swapped pair.
pub fn alternating_cert(c: i64, e: i32) -> DStatOrderCert {
    let z = Term::inverse_power(rational::int(c), e);
    DStatOrderCert::new(
        alternating_x(),
        LatticeVector::zero(2),
        RuleSequence::single(vec![z.clone(), z]).expect("dim 2"),
        IndexSet::All,
        swapped_pair(),
    )
    .expect("dims agree")
}

#[derive(Debug, Clone)]
pub struct AlternatingReport {
    pub printed: Result<DeferredPair, PairError>,
    pub falsify: FalsifyReport,
}

impl AlternatingReport {
    /// The printed pair is rejected and no whitelisted dominator works under
    /// the swapped pair either.
    pub fn unverifiable_as_printed(&self) -> bool {
        self.printed.is_err() && self.falsify.all_density_one()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "printed_pair": "p: 4n q: 2n",
            "printed_pair_valid": self.printed.is_ok(),
            "printed_pair_error": self.printed.as_ref().err().map(ToString::to_string),
            "swapped_pair": swapped_pair().to_string(),
            "falsifier": self.falsify.to_json(),
            "unverifiable_as_printed": self.unverifiable_as_printed(),
        })
    }
}

pub fn alternating_example(opts: &CheckOptions) -> AlternatingReport {
    AlternatingReport {
        printed: printed_pair(),
        falsify: falsify_whitelist(&alternating_x(), &LatticeVector::zero(2), &swapped_pair(), opts),
    }
}

/// The alternating example as spec text, falsified under the swapped pair.
pub fn alternating_spec() -> String {
    format!(
        "SPACE 2\nPAIR swapped {}\nSEQ x = {}\n\
         TASK alternating = falsify seq=x limit=(0, 0) pair=swapped printed_p=4n printed_q=2n\n",
        swapped_pair(),
        alternating_x()
    )
}

/// Pairs whose window width grows, so densities are exact.
const GROWING_PAIRS: [(u64, u64, u64, u64); 6] = [(0, 0, 1, 0), (1, 0, 2, 0), (2, 0, 4, 0), (0, 0, 2, 0), (1, 0, 3, 1), (1, 1, 3, 2)];

/// Pairs with bounded `p_n / (q_n − p_n)`.
pub const BOUNDED_TARGETS: [(u64, u64, u64, u64); 4] = [(2, 0, 4, 0), (0, 0, 2, 0), (1, 0, 3, 0), (1, 1, 2, 3)];

/// Null sets used to hide noise from the certificates.
const NULL_SETS: [&str; 6] = ["EMPTY", "POW(2)", "POW(3)", "FIN(2,3,5,7)", "AND(POW(2),AP(3,1))", "OR(POW(3),FIN(6,10))"];

/// Sets with positive density.
const THICK_SETS: [&str; 5] = ["ALL", "AP(2,0)", "AP(3,1)", "NOT(POW(2))", "OR(AP(2,0),AP(3,0))"];

fn pair_of(t: (u64, u64, u64, u64)) -> DeferredPair {
    DeferredPair::new(IndexRule::new(t.0, t.1), IndexRule::new(t.2, t.3)).expect("listed pairs are valid")
}

fn paren(r: &Rational) -> String {
    format!("({})", rational::compact(r))
}

/// Seeded generator of certificates that verify by construction.
#[derive(Debug, Clone)]
pub struct CertGen {
    rng: ChaCha8Rng,
}

/// Per-coordinate shape of a generated sequence: `l + r/(n+b)^f` dominated
/// by `c/n^e`, with `|r| <= c` and `f >= e`.
#[derive(Debug, Clone)]
struct Shape {
    limit: Rational,
    r: i64,
    b: i64,
    f: u32,
    c: i64,
    e: u32,
}

impl Shape {
    fn x_term(&self) -> String {
        format!("{} + ({})/(n+{})^{}", paren(&self.limit), self.r, self.b, self.f)
    }

    fn z_term(&self) -> String {
        format!("{}/n^{}", self.c, self.e)
    }
}

impl CertGen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn dim(&mut self) -> usize {
        self.rng.gen_range(1..=3)
    }

    pub fn pair(&mut self) -> DeferredPair {
        pair_of(*GROWING_PAIRS.choose(&mut self.rng).expect("non-empty"))
    }

    pub fn bounded_target(&mut self) -> DeferredPair {
        pair_of(*BOUNDED_TARGETS.choose(&mut self.rng).expect("non-empty"))
    }

    pub fn thick_set(&mut self) -> IndexSet {
        THICK_SETS.choose(&mut self.rng).expect("non-empty").parse().expect("valid literal")
    }

    pub fn null_set(&mut self) -> IndexSet {
        NULL_SETS.choose(&mut self.rng).expect("non-empty").parse().expect("valid literal")
    }

    pub fn rational(&mut self, max_num: i64) -> Rational {
        rational::rat(self.rng.gen_range(-max_num..=max_num), self.rng.gen_range(1..=4))
    }

    fn shape(&mut self, sign: Option<i64>) -> Shape {
        let c = self.rng.gen_range(1..=6);
        let e = self.rng.gen_range(1..=2);
        let magnitude = self.rng.gen_range(0..=c);
        let r = match sign {
            Some(s) => s * magnitude,
            None if self.rng.gen_bool(0.5) => -magnitude,
            None => magnitude,
        };
        Shape {
            limit: self.rational(6),
            r,
            b: self.rng.gen_range(0..=3),
            f: e + self.rng.gen_range(0..=1),
            c,
            e,
        }
    }

    fn terms(rows: &[String]) -> Vec<Term> {
        rows.iter().map(|t| Term::parse(t).expect("generated terms parse")).collect()
    }

    /// A verified certificate whose sequence misbehaves on a null set.
    pub fn cert(&mut self, dim: usize, pair: DeferredPair) -> DStatOrderCert {
        let shapes: Vec<Shape> = (0..dim).map(|_| self.shape(None)).collect();
        let alt: Vec<Shape> = shapes
            .iter()
            .map(|s| {
                let r = self.rng.gen_range(-s.c..=s.c);
                Shape { r, ..s.clone() }
            })
            .collect();
        let noise = self.null_set();
        let wild: Vec<String> = (0..dim).map(|_| format!("{}n", self.rng.gen_range(-9..=9))).collect();
        let big: Vec<String> = vec!["n^2".to_string(); dim];
        let xs: Vec<String> = shapes.iter().map(Shape::x_term).collect();
        let xs_alt: Vec<String> = alt.iter().map(Shape::x_term).collect();
        let zs: Vec<String> = shapes.iter().map(Shape::z_term).collect();

        let mut x_pieces = Vec::new();
        let mut z_pieces = Vec::new();
        if noise != IndexSet::Empty {
            x_pieces.push(Piece::new(noise.clone(), Self::terms(&wild)));
            z_pieces.push(Piece::new(noise.clone(), Self::terms(&big)));
        }
        if self.rng.gen_bool(0.5) {
            x_pieces.push(Piece::new(IndexSet::ap(2, 0).expect("valid"), Self::terms(&xs_alt)));
        }
        x_pieces.push(Piece::new(IndexSet::All, Self::terms(&xs)));
        z_pieces.push(Piece::new(IndexSet::All, Self::terms(&zs)));

        let limit = LatticeVector::new(shapes.iter().map(|s| s.limit.clone()).collect()).expect("dim >= 1");
        let k = noise.not();
        DStatOrderCert::new(
            RuleSequence::new(x_pieces).expect("generated pieces are total"),
            limit,
            RuleSequence::new(z_pieces).expect("generated pieces are total"),
            k,
            pair,
        )
        .expect("dims agree")
    }

    /// A verified certificate for a sequence monotone on all of ℕ.
    pub fn monotone_cert(&mut self, dim: usize, pair: DeferredPair) -> DStatOrderCert {
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        let shapes: Vec<Shape> = (0..dim).map(|_| self.shape(Some(sign))).collect();
        let xs: Vec<String> = shapes.iter().map(Shape::x_term).collect();
        let zs: Vec<String> = shapes.iter().map(Shape::z_term).collect();
        let limit = LatticeVector::new(shapes.iter().map(|s| s.limit.clone()).collect()).expect("dim >= 1");
        DStatOrderCert::new(
            RuleSequence::single(Self::terms(&xs)).expect("dim >= 1"),
            limit,
            RuleSequence::single(Self::terms(&zs)).expect("dim >= 1"),
            IndexSet::All,
            pair,
        )
        .expect("dims agree")
    }

    /// A verified certificate with limit 0 living in a random coordinate
    /// ideal, together with an ideal that contains it.
    pub fn ideal_cert(&mut self, dim: usize, pair: DeferredPair) -> (DStatOrderCert, OrderIdeal) {
        let support: Vec<usize> = (1..=dim).filter(|_| self.rng.gen_bool(0.6)).collect();
        let base = self.cert(dim, pair);
        let keep = |seq: &RuleSequence, limit_shift: Option<&LatticeVector>| {
            let shifted = match limit_shift {
                Some(l) => seq.sub_vector(l).expect("same dim"),
                None => seq.clone(),
            };
            let pieces = shifted
                .pieces()
                .iter()
                .map(|p| {
                    let terms = p
                        .terms
                        .iter()
                        .enumerate()
                        .map(|(i, t)| if support.contains(&(i + 1)) { t.clone() } else { Term::zero() })
                        .collect();
                    Piece::new(p.guard.clone(), terms)
                })
                .collect();
            RuleSequence::new(pieces).expect("same shape")
        };
        let x = keep(&base.x, Some(&base.limit));
        let z = keep(&base.z, None);
        let cert = DStatOrderCert::with_zset(x, LatticeVector::zero(dim), z, base.k, base.zset, pair).expect("dims agree");
        let mut extra: Vec<usize> = (1..=dim).filter(|_| self.rng.gen_bool(0.3)).collect();
        extra.extend(&support);
        (cert, OrderIdeal::new(extra))
    }

    /// `(a, b)` with `a.x >= b.x` pointwise, both verified.
    pub fn ordered_certs(&mut self, dim: usize, pair: DeferredPair) -> (DStatOrderCert, DStatOrderCert) {
        let b = self.cert(dim, pair);
        let shifts: Vec<(Rational, i64, u32)> = (0..dim)
            .map(|_| {
                (
                    rational::rat(self.rng.gen_range(0..=3), self.rng.gen_range(1..=3)),
                    self.rng.gen_range(0..=4),
                    self.rng.gen_range(1..=2),
                )
            })
            .collect();
        let w_terms: Vec<String> = shifts
            .iter()
            .map(|(c, s, f)| format!("{} + {s}/(n+1)^{f}", paren(c)))
            .collect();
        let dz_terms: Vec<String> = shifts.iter().map(|(_, s, f)| format!("{s}/n^{f}")).collect();
        let w = RuleSequence::single(Self::terms(&w_terms)).expect("dim >= 1");
        let dz = RuleSequence::single(Self::terms(&dz_terms)).expect("dim >= 1");
        let shift = LatticeVector::new(shifts.into_iter().map(|(c, _, _)| c).collect()).expect("dim >= 1");
        let a = DStatOrderCert::with_zset(
            b.x.add(&w).expect("same dim"),
            b.limit.add(&shift).expect("same dim"),
            b.z.add(&dz).expect("same dim"),
            b.k.clone(),
            b.zset.clone(),
            pair,
        )
        .expect("dims agree");
        (a, b)
    }

    /// `x` equal to the certificate's sequence except on a null set.
    pub fn null_perturbation(&mut self, cert: &DStatOrderCert) -> RuleSequence {
        let t = self.null_set();
        if t == IndexSet::Empty {
            return cert.x.clone();
        }
        let value = format!("{}", self.rng.gen_range(-20..=20));
        let mut pieces = vec![Piece::new(t, Self::terms(&vec![value; cert.dim()]))];
        pieces.extend(cert.x.pieces().iter().cloned());
        RuleSequence::new(pieces).expect("last guard is ALL")
    }

    /// A random tree over the index-set algebra.
    pub fn random_set(&mut self, depth: usize) -> IndexSet {
        let leaf = depth == 0 || self.rng.gen_bool(0.35);
        if leaf {
            return match self.rng.gen_range(0..6) {
                0 => IndexSet::All,
                1 => {
                    let len = self.rng.gen_range(1..=6);
                    IndexSet::finite((0..len).map(|_| self.rng.gen_range(1..=2_000)).collect()).expect("positive")
                }
                2 | 3 => {
                    let c = self.rng.gen_range(1..=12);
                    IndexSet::ap(c, self.rng.gen_range(0..c)).expect("residue below modulus")
                }
                _ => IndexSet::pow(self.rng.gen_range(2..=4)).expect("exponent >= 2"),
            };
        }
        let a = self.random_set(depth - 1);
        match self.rng.gen_range(0..3) {
            0 => IndexSet::Not(Box::new(a)),
            1 => IndexSet::And(Box::new(a), Box::new(self.random_set(depth - 1))),
            _ => IndexSet::Or(Box::new(a), Box::new(self.random_set(depth - 1))),
        }
    }

    pub fn below(&mut self, hi: u64) -> u64 {
        self.rng.gen_range(0..hi)
    }

    pub fn lattice_vector(&mut self, dim: usize) -> LatticeVector {
        LatticeVector::new((0..dim).map(|_| self.rational(9)).collect()).expect("dim >= 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::check_dstat_order_conv;

    fn opts() -> CheckOptions {
        CheckOptions {
            prefix_n: 300,
            ..CheckOptions::default()
        }
    }

    #[test]
    fn worked_example_values() {
        assert_eq!(cube_z().eval(8), LatticeVector::from_ints(&[0, 64]).unwrap());
        assert_eq!(cube_z().eval(10), LatticeVector::from_ratios(&[(0, 1), (1, 100)]).unwrap());
        assert_eq!(alternating_x().eval(3), LatticeVector::from_ints(&[0, 2]).unwrap());
        assert_eq!(alternating_x().eval(4), LatticeVector::from_ints(&[0, -2]).unwrap());
        assert!(printed_pair().is_err());
    }

    #[test]
    fn generated_certs_verify() {
        let mut g = CertGen::new(7);
        for _ in 0..12 {
            let dim = g.dim();
            let pair = g.pair();
            let cert = g.cert(dim, pair);
            let v = check_dstat_order_conv(&cert, &opts());
            assert!(v.is_verified(), "{cert:?}\n{:?}", v.evidence);
        }
    }

    #[test]
    fn alternating_falsifier() {
        let r = alternating_example(&opts());
        assert_eq!(r.falsify.entries.len(), 30);
        assert!(r.unverifiable_as_printed());
    }
}
