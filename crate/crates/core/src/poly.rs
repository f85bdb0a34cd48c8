//! Univariate polynomials and rational functions in `n` over ℚ.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{self, Rational};

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::from_coeffs(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, n: u64) -> Rational {
        self.eval(&rational::from_u64(n))
    }

    /// `p(n + 1)` as a polynomial in `n`.
    pub fn shift_by_one(&self) -> Self {
        let n_plus_1 = Self::from_coeffs(vec![Rational::one(), Rational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&n_plus_1).add(&Self::constant(c.clone())))
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d_deg = divisor.degree().expect("division by the zero polynomial");
        let d_lead = divisor.leading().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(d_deg).max(1)];
        while rem.len() > d_deg && !rem.is_empty() {
            let shift = rem.len() - 1 - d_deg;
            let factor = rem.last().expect("non-empty") / &d_lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(lead) => a.scale(&lead.recip()),
            None => a,
        }
    }

    /// Every real root `r` satisfies `|r| <= bound`: `1 + max |a_i / a_d|`,
    /// rounded down. Zero for constant polynomials.
    pub fn cauchy_bound(&self) -> BigInt {
        let Some(lead) = self.leading() else {
            return BigInt::zero();
        };
        if self.coeffs.len() == 1 {
            return BigInt::zero();
        }
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .max()
            .expect("degree >= 1");
        rational::floor(&(max + Rational::one()))
    }

    /// Integer coefficients of `k · self` for the least positive `k` that clears denominators.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect()
    }
}

/// Sign of an integer-coefficient polynomial at `n`.
fn int_poly_sign(coeffs: &[BigInt], n: u64) -> Ordering {
    match eval_int_poly(coeffs, n).sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Horner evaluation, in `i128` while it fits.
fn eval_int_poly(coeffs: &[BigInt], n: u64) -> BigInt {
    let small: Option<i128> = coeffs.iter().rev().try_fold(0i128, |acc, c| {
        acc.checked_mul(n as i128)?.checked_add(c.to_i128()?)
    });
    match small {
        Some(v) => BigInt::from(v),
        None => {
            let n = BigInt::from(n);
            coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &n + c)
        }
    }
}

/// A quotient of polynomials whose denominator never vanishes at `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
    num_int: Vec<BigInt>,
    den_int: Vec<BigInt>,
}

impl RatFunc {
    /// Builds `num / den`, reducing by the polynomial gcd. The caller
    /// guarantees `den(n) != 0` for every integer `n >= 1`.
    pub(crate) fn from_parts(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if num.is_zero() {
            (Poly::zero(), Poly::constant(Rational::one()))
        } else {
            let g = num.gcd(&den);
            let (n, _) = num.div_rem(&g);
            let (d, _) = den.div_rem(&g);
            let lead = d.leading().expect("nonzero").recip();
            (n.scale(&lead), d.scale(&lead))
        };
        // Clear denominators jointly so num_int / den_int == num / den.
        let lcm = num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let k = Rational::from_integer(lcm);
        let to_int = |p: &Poly| p.coeffs().iter().map(|c| (c * &k).to_integer()).collect();
        Self {
            num_int: to_int(&num),
            den_int: to_int(&den),
            num,
            den,
        }
    }

    pub fn poly(p: Poly) -> Self {
        Self::from_parts(p, Poly::constant(Rational::one()))
    }

    pub fn constant(c: Rational) -> Self {
        Self::poly(Poly::constant(c))
    }

    pub fn var() -> Self {
        Self::poly(Poly::var())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value, if this function is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rational::zero()),
            (Some(0), Some(0)) => Some(&self.num.coeffs()[0] / &self.den.coeffs()[0]),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_parts(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(self.num.neg(), self.den.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_parts(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_parts(self.num.scale(k), self.den.clone())
    }

    /// `self / other`; the caller has checked that `other` has no zero at `n >= 1`.
    pub(crate) fn div_unchecked(&self, other: &Self) -> Self {
        Self::from_parts(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn eval(&self, n: u64) -> Rational {
        Rational::new(eval_int_poly(&self.num_int, n), eval_int_poly(&self.den_int, n))
    }

    /// Sign of the value at `n` without building the fraction.
    pub fn sign_at(&self, n: u64) -> Ordering {
        let num = int_poly_sign(&self.num_int, n);
        match int_poly_sign(&self.den_int, n) {
            Ordering::Less => num.reverse(),
            _ => num,
        }
    }
}

/// Largest integer argument scanned exhaustively when a root bound is needed.
pub const SCAN_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("root bound {bound} exceeds the scan cap of {SCAN_CAP}")]
pub struct BoundTooLarge {
    pub bound: BigInt,
}

fn bound_to_u64(bound: BigInt) -> Result<u64, BoundTooLarge> {
    match bound.to_u64() {
        Some(b) if b <= SCAN_CAP => Ok(b),
        _ => Err(BoundTooLarge { bound }),
    }
}

impl Poly {
    /// Smallest `n >= 1` with `p(n) = 0`, found by scanning up to the Cauchy bound.
    pub fn first_positive_root(&self) -> Result<Option<u64>, BoundTooLarge> {
        if self.is_zero() {
            return Ok(Some(1));
        }
        let bound = bound_to_u64(self.cauchy_bound())?;
        let ints = self.integer_coeffs();
        Ok((1..=bound).find(|&n| eval_int_poly(&ints, n).is_zero()))
    }
}

impl RatFunc {
    /// `(B, s)` such that the sign of `f(n)` is `s` for every `n > B`.
    pub fn eventual_sign(&self) -> Result<(u64, Ordering), BoundTooLarge> {
        let Some(lead) = self.num.leading() else {
            return Ok((0, Ordering::Equal));
        };
        let bound = self.num.cauchy_bound().max(self.den.cauchy_bound());
        let bound = bound_to_u64(bound)?;
        let num_sign = if lead.is_positive() { Ordering::Greater } else { Ordering::Less };
        let den_lead = self.den.leading().expect("nonzero denominator");
        let sign = if den_lead.is_positive() { num_sign } else { num_sign.reverse() };
        Ok((bound, sign))
    }

    /// `f(n + 1) − f(n)`.
    pub fn forward_difference(&self) -> Self {
        let shifted = Self::from_parts(self.num.shift_by_one(), self.den.shift_by_one());
        shifted.sub(self)
    }
}
