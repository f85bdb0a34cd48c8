//! Exact rational scalars.
//!
//! Every scalar in the crate is a [`Rational`]: an arbitrary-precision
//! fraction that is always kept in lowest terms with a positive denominator.
//! Nothing is ever rounded.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Builds `num / den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `k` as a rational.
pub fn int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

pub fn from_u64(k: u64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// Canonical rendering `num/den`, integers included (`5/1`).
pub fn canonical(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Wrapper that displays a rational canonically.
pub struct Canon<'a>(pub &'a Rational);

impl fmt::Display for Canon<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Compact rendering used when writing spec files: `3`, `-3`, `1/2`.
pub fn compact(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest integer `<= r`.
pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Parses `a`, `-a`, or `a/b` with integer `a`, `b` and `b != 0`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Lossy conversion used only for human-facing summaries.
pub fn to_f64(r: &Rational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    let scale = n.bits().max(d.bits()).saturating_sub(60);
    let n = (n >> scale).to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = (d >> scale).to_string().parse::<f64>().unwrap_or(f64::NAN);
    if d == 0.0 {
        if r.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    } else {
        n / d
    }
}
