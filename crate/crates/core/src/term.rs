//! Closed-form terms in `n` and their asymptotic classification.
//!
//! A [`TermExpr`] is built from rational constants, the variable `n`, the
//! four field operations and integer powers, so it always denotes a
//! rational function of `n`. A [`Term`] pairs the tree with that compiled
//! rational function; constructing one rejects any division by a
//! subexpression that vanishes at some `n >= 1`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lex::{Cursor, SyntaxError, Token};
use crate::poly::{BoundTooLarge, RatFunc};
use crate::rational::{self, Rational};

/// Largest `|k|` accepted in `expr^k`.
pub const MAX_EXPONENT: i32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermExpr {
    Const(Rational),
    N,
    Neg(Box<TermExpr>),
    Add(Box<TermExpr>, Box<TermExpr>),
    Sub(Box<TermExpr>, Box<TermExpr>),
    Mul(Box<TermExpr>, Box<TermExpr>),
    Div(Box<TermExpr>, Box<TermExpr>),
    Pow(Box<TermExpr>, i32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("denominator `{denominator}` vanishes at n = {n}")]
    DenominatorVanishes { n: u64, denominator: String },
    #[error("cannot decide whether `{denominator}` vanishes: {source}")]
    Undecidable {
        denominator: String,
        source: BoundTooLarge,
    },
    #[error("exponent {0} is outside -{MAX_EXPONENT}..={MAX_EXPONENT}")]
    ExponentTooLarge(i64),
}

impl TermExpr {
    pub fn constant(r: Rational) -> Self {
        TermExpr::Const(r)
    }

    /// `c / n^e`.
    pub fn inverse_power(c: Rational, e: i32) -> Self {
        TermExpr::Div(
            Box::new(TermExpr::Const(c)),
            Box::new(TermExpr::Pow(Box::new(TermExpr::N), e)),
        )
    }

    fn compile(&self) -> Result<RatFunc, TermError> {
        Ok(match self {
            TermExpr::Const(c) => RatFunc::constant(c.clone()),
            TermExpr::N => RatFunc::var(),
            TermExpr::Neg(a) => a.compile()?.neg(),
            TermExpr::Add(a, b) => a.compile()?.add(&b.compile()?),
            TermExpr::Sub(a, b) => a.compile()?.sub(&b.compile()?),
            TermExpr::Mul(a, b) => a.compile()?.mul(&b.compile()?),
            TermExpr::Div(a, b) => {
                let den = b.compile()?;
                ensure_nonvanishing(&den, b)?;
                a.compile()?.div_unchecked(&den)
            }
            TermExpr::Pow(a, k) => {
                if k.abs() > MAX_EXPONENT {
                    return Err(TermError::ExponentTooLarge(*k as i64));
                }
                let base = a.compile()?;
                let mut acc = RatFunc::constant(Rational::one());
                for _ in 0..k.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                if *k < 0 {
                    ensure_nonvanishing(&base, a)?;
                    RatFunc::constant(Rational::one()).div_unchecked(&acc)
                } else {
                    acc
                }
            }
        })
    }
}

fn ensure_nonvanishing(f: &RatFunc, expr: &TermExpr) -> Result<(), TermError> {
    match f.num().first_positive_root() {
        Ok(None) => Ok(()),
        Ok(Some(n)) => Err(TermError::DenominatorVanishes {
            n,
            denominator: expr.to_string(),
        }),
        Err(source) => Err(TermError::Undecidable {
            denominator: expr.to_string(),
            source,
        }),
    }
}

impl fmt::Display for TermExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermExpr::Const(c) => {
                if c.is_integer() && !c.is_negative() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "({})", rational::compact(c))
                }
            }
            TermExpr::N => write!(f, "n"),
            TermExpr::Neg(a) => match **a {
                TermExpr::Const(_) | TermExpr::N => write!(f, "-{a}"),
                _ => write!(f, "-({a})"),
            },
            TermExpr::Add(a, b) => write!(f, "({a} + {b})"),
            TermExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            TermExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            TermExpr::Div(a, b) => write!(f, "({a} / {b})"),
            TermExpr::Pow(a, k) => match **a {
                TermExpr::Const(_) | TermExpr::N => write!(f, "{a}^{k}"),
                _ => write!(f, "({a})^{k}"),
            },
        }
    }
}

/// A term together with its compiled rational function.
#[derive(Debug, Clone)]
pub struct Term {
    expr: TermExpr,
    func: RatFunc,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

impl Eq for Term {}

impl Term {
    pub fn new(expr: TermExpr) -> Result<Self, TermError> {
        let func = expr.compile()?;
        Ok(Self { expr, func })
    }

    pub fn parse(text: &str) -> Result<Self, TermParseError> {
        let mut cursor = Cursor::new(text)?;
        let expr = parse_expr(&mut cursor)?;
        cursor.expect_end()?;
        Ok(Term::new(expr)?)
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            func: RatFunc::constant(c.clone()),
            expr: TermExpr::Const(c),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// `c / n^e` for `e >= 0`.
    pub fn inverse_power(c: Rational, e: i32) -> Self {
        Term::new(TermExpr::inverse_power(c, e)).expect("n^e never vanishes for n >= 1")
    }

    pub fn expr(&self) -> &TermExpr {
        &self.expr
    }

    pub fn func(&self) -> &RatFunc {
        &self.func
    }

    pub fn eval(&self, n: u64) -> Rational {
        self.func.eval(n)
    }

    pub fn is_zero(&self) -> bool {
        self.func.is_zero()
    }

    pub fn add(&self, other: &Term) -> Term {
        Term {
            expr: TermExpr::Add(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
            func: self.func.add(&other.func),
        }
    }

    pub fn sub(&self, other: &Term) -> Term {
        Term {
            expr: TermExpr::Sub(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
            func: self.func.sub(&other.func),
        }
    }

    pub fn neg(&self) -> Term {
        Term {
            expr: TermExpr::Neg(Box::new(self.expr.clone())),
            func: self.func.neg(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Term {
        if k.is_one() {
            return self.clone();
        }
        if k.is_zero() {
            return Term::zero();
        }
        Term {
            expr: TermExpr::Mul(Box::new(TermExpr::Const(k.clone())), Box::new(self.expr.clone())),
            func: self.func.scale(k),
        }
    }

    pub fn tail_class(&self) -> TailClass {
        tail_class(&self.func)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Invalid(#[from] TermError),
}

/// Parses one term from the cursor, stopping before `,`, `;`, `)` or a keyword.
///
/// ```text
/// expr   = mul { ("+" | "-") mul }
/// mul    = unary { ("*" | "/") unary | implicit }
/// unary  = "-" unary | power
/// power  = atom [ "^" [ "-" ] int ]
/// atom   = int | "n" | "(" expr ")"
/// ```
///
/// `2n` and `3(n+1)` are read as products. Divisions and negations of
/// literal constants are folded, so `1/2` is the constant one half.
pub fn parse_expr(c: &mut Cursor) -> Result<TermExpr, SyntaxError> {
    let mut lhs = parse_mul(c)?;
    loop {
        if c.eat_sym('+') {
            lhs = TermExpr::Add(Box::new(lhs), Box::new(parse_mul(c)?));
        } else if c.eat_sym('-') {
            lhs = TermExpr::Sub(Box::new(lhs), Box::new(parse_mul(c)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_mul(c: &mut Cursor) -> Result<TermExpr, SyntaxError> {
    let mut lhs = parse_unary(c)?;
    loop {
        if c.eat_sym('*') {
            lhs = TermExpr::Mul(Box::new(lhs), Box::new(parse_unary(c)?));
        } else if c.eat_sym('/') {
            let rhs = parse_unary(c)?;
            lhs = match (lhs, rhs) {
                (TermExpr::Const(a), TermExpr::Const(b)) if !b.is_zero() => TermExpr::Const(a / b),
                (TermExpr::Const(_), TermExpr::Const(_)) => {
                    return Err(c.error("division by the constant 0"));
                }
                (a, b) => TermExpr::Div(Box::new(a), Box::new(b)),
            };
        } else if matches!(c.peek(), Some(Token::Sym('('))) || matches!(c.peek(), Some(Token::Ident(s)) if s == "n")
        {
            lhs = TermExpr::Mul(Box::new(lhs), Box::new(parse_power(c)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_unary(c: &mut Cursor) -> Result<TermExpr, SyntaxError> {
    if c.eat_sym('-') {
        return Ok(match parse_unary(c)? {
            TermExpr::Const(v) => TermExpr::Const(-v),
            other => TermExpr::Neg(Box::new(other)),
        });
    }
    parse_power(c)
}

fn parse_power(c: &mut Cursor) -> Result<TermExpr, SyntaxError> {
    let base = parse_atom(c)?;
    if !c.eat_sym('^') {
        return Ok(base);
    }
    let negative = c.eat_sym('-');
    let column = c.column();
    let k = c.expect_int()?;
    let k = k
        .to_i32()
        .filter(|k| *k <= MAX_EXPONENT)
        .ok_or_else(|| SyntaxError {
            column,
            message: format!("exponent must be at most {MAX_EXPONENT}"),
        })?;
    Ok(TermExpr::Pow(Box::new(base), if negative { -k } else { k }))
}

fn parse_atom(c: &mut Cursor) -> Result<TermExpr, SyntaxError> {
    match c.peek().cloned() {
        Some(Token::Int(i)) => {
            c.next();
            Ok(TermExpr::Const(Rational::from_integer(i)))
        }
        Some(Token::Ident(s)) if s == "n" => {
            c.next();
            Ok(TermExpr::N)
        }
        Some(Token::Sym('(')) => {
            c.next();
            let e = parse_expr(c)?;
            c.expect_sym(')')?;
            Ok(e)
        }
        _ => Err(c.error("expected a number, `n` or `(`")),
    }
}

/// Behaviour of a term as `n → ∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Limit {
    Finite(Rational),
    PosInfinity,
    NegInfinity,
    Unknown,
}

/// Eventual monotonicity: the property holds for all `m >= from`
/// (comparing `f(m)` with `f(m + 1)`), and `from` is the least such index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Constant { from: u64 },
    NonIncreasing { from: u64 },
    NonDecreasing { from: u64 },
    Unknown,
}

impl Monotonicity {
    /// Start of the nonincreasing tail, if any.
    pub fn nonincreasing_from(&self) -> Option<u64> {
        match *self {
            Monotonicity::Constant { from } | Monotonicity::NonIncreasing { from } => Some(from),
            _ => None,
        }
    }

    pub fn nondecreasing_from(&self) -> Option<u64> {
        match *self {
            Monotonicity::Constant { from } | Monotonicity::NonDecreasing { from } => Some(from),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailClass {
    pub limit: Limit,
    pub monotone: Monotonicity,
}

fn limit_of(f: &RatFunc) -> Limit {
    let (num, den) = (f.num(), f.den());
    let (Some(dn), Some(dd)) = (num.degree(), den.degree()) else {
        return Limit::Finite(Rational::zero());
    };
    let ratio = num.leading().expect("nonzero") / den.leading().expect("nonzero");
    match dn.cmp(&dd) {
        Ordering::Less => Limit::Finite(Rational::zero()),
        Ordering::Equal => Limit::Finite(ratio),
        Ordering::Greater if ratio.is_positive() => Limit::PosInfinity,
        Ordering::Greater => Limit::NegInfinity,
    }
}

/// Limit by the leading-term rule; monotonicity from the sign of the
/// forward difference, which is constant beyond the Cauchy bound of its
/// numerator and denominator and is checked exactly below it.
pub fn tail_class(f: &RatFunc) -> TailClass {
    let limit = limit_of(f);
    let diff = f.forward_difference();
    if diff.is_zero() {
        return TailClass {
            limit,
            monotone: Monotonicity::Constant { from: 1 },
        };
    }
    let monotone = match diff.eventual_sign() {
        Err(_) => Monotonicity::Unknown,
        Ok((bound, sign)) => {
            let compatible = |n: u64| diff.sign_at(n) != sign.reverse();
            let mut from = bound + 1;
            while from > 1 && compatible(from - 1) {
                from -= 1;
            }
            if sign == Ordering::Less {
                Monotonicity::NonIncreasing { from }
            } else {
                Monotonicity::NonDecreasing { from }
            }
        }
    };
    TailClass { limit, monotone }
}

/// Integer `k` as a term constant.
pub fn int_term(k: i64) -> Term {
    Term::constant(Rational::from_integer(BigInt::from(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn t(s: &str) -> Term {
        Term::parse(s).unwrap()
    }

    #[test]
    fn parse_and_evaluate() {
        assert_eq!(t("1/n^2").eval(10), rat(1, 100));
        assert_eq!(t("(n+1)/2").eval(7), int(4));
        assert_eq!(t("-n/2").eval(4), int(-2));
        assert_eq!(t("2n + 1").eval(3), int(7));
        assert_eq!(t("3(n-1)^2").eval(3), int(12));
        assert_eq!(t("n^-2").eval(3), rat(1, 9));
        assert_eq!(t("1/2").expr(), &TermExpr::Const(rat(1, 2)));
        assert_eq!(t("-3").expr(), &TermExpr::Const(int(-3)));
    }

    #[test]
    fn vanishing_denominators_are_rejected() {
        match Term::parse("1/(n-3)") {
            Err(TermParseError::Invalid(TermError::DenominatorVanishes { n, .. })) => assert_eq!(n, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Term::parse("(n^2 - 5n + 6)^-1").is_err());
        assert!(Term::parse("1/(n - n)").is_err());
        assert!(Term::parse("1/(2n - 7)").is_ok());
        assert!(Term::parse("1/0").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["1/n^2", "(n+1)/2", "-n/2", "3 - 1/2 * n^-3", "-(n+1)", "(-1/2)*n", "(2n)^2"] {
            let a = t(s);
            let b = t(&a.to_string());
            assert_eq!(a, b, "{s} -> {a}");
        }
    }

    #[test]
    fn tail_classes() {
        let c = t("1/n^2").tail_class();
        assert_eq!(c.limit, Limit::Finite(int(0)));
        assert_eq!(c.monotone, Monotonicity::NonIncreasing { from: 1 });
        assert_eq!(t("n^2").tail_class().limit, Limit::PosInfinity);
        assert_eq!(t("-n").tail_class().limit, Limit::NegInfinity);
        let c = t("(n+1)/(2n)").tail_class();
        assert_eq!(c.limit, Limit::Finite(rat(1, 2)));
        assert_eq!(c.monotone, Monotonicity::NonIncreasing { from: 1 });
        assert_eq!(t("5").tail_class().monotone, Monotonicity::Constant { from: 1 });
        // (n − 3)^2 decreases until n = 3, then increases
        assert_eq!(t("(n-3)^2").tail_class().monotone, Monotonicity::NonDecreasing { from: 3 });
        assert_eq!(t("1 - 1/n").tail_class().monotone, Monotonicity::NonDecreasing { from: 1 });
    }
}
