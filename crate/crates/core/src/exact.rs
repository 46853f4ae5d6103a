//! Exact arithmetic in a real quadratic field `Q(sqrt(D))`.
//!
//! An [`ExactReal`] stores `(a + b*sqrt(D)) / c` with arbitrary precision
//! integers. Values are kept in a canonical form so that structural equality
//! is value equality:
//!
//! - `c > 0`
//! - `b == 0` implies `D == 0`
//! - when `b != 0`, `D` is not a perfect square and carries no square factor
//!   below [`SQUARE_FACTOR_SEARCH_LIMIT`]
//! - `gcd(a, b, c) == 1`
//!
//! Comparison and floors are decided with integer arithmetic only. Mixing two
//! different irrational fields is an error rather than an approximation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Trial divisors up to this bound are used to strip square factors from `D`.
pub const SQUARE_FACTOR_SEARCH_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative radicand {0}")]
    NegativeRadicand(BigInt),
    #[error("values live in different fields Q(sqrt({0})) and Q(sqrt({1}))")]
    UnsupportedField(BigInt, BigInt),
    #[error("cannot parse exact number from {0:?}: {1}")]
    Parse(String, &'static str),
}

/// A number `(a + b*sqrt(D)) / c` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactReal {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

fn is_perfect_square(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    if &r * &r == *x {
        Some(r)
    } else {
        None
    }
}

/// Splits `d` into `(s, rest)` with `d = s^2 * rest`, stripping every square
/// factor whose root is below the search limit, and `rest` itself if square.
fn split_square_factor(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut s = BigInt::one();
    let mut k: u64 = 2;
    while k <= SQUARE_FACTOR_SEARCH_LIMIT {
        let kk = BigInt::from(k) * BigInt::from(k);
        if kk > rest {
            break;
        }
        let kb = BigInt::from(k);
        while (&rest % &kk).is_zero() {
            rest /= &kk;
            s *= &kb;
        }
        k += 1;
    }
    if let Some(r) = is_perfect_square(&rest) {
        s *= r;
        rest = BigInt::one();
    }
    (s, rest)
}

impl ExactReal {
    /// Builds `(a + b*sqrt(d)) / c` and normalizes it.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, ExactError> {
        Self::normalize(a.into(), b.into(), c.into(), d.into(), false)
    }

    /// Same as [`ExactReal::new`] for a radicand that is already canonical.
    fn in_field(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self, ExactError> {
        Self::normalize(a, b, c, d, true)
    }

    fn normalize(
        mut a: BigInt,
        mut b: BigInt,
        mut c: BigInt,
        mut d: BigInt,
        canonical_d: bool,
    ) -> Result<Self, ExactError> {
        if c.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if d.is_negative() {
            return Err(ExactError::NegativeRadicand(d));
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        if b.is_zero() || d.is_zero() {
            b = BigInt::zero();
            d = BigInt::zero();
        } else if !canonical_d {
            let (s, rest) = split_square_factor(&d);
            b *= s;
            if rest.is_one() {
                a += &b;
                b = BigInt::zero();
                d = BigInt::zero();
            } else {
                d = rest;
            }
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(ExactReal { a, b, c, d })
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactReal {
            a: n.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::new(r.numer().clone(), 0, r.denom().clone(), 0).expect("rational has nonzero denom")
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `sqrt(d)` for a non-negative integer `d`.
    pub fn sqrt(d: impl Into<BigInt>) -> Result<Self, ExactError> {
        Self::new(0, 1, 1, d)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// The radicand `D`, zero for rational values.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_irrational(&self) -> bool {
        !self.is_rational()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.c.is_one()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.a.clone())
    }

    /// Lossy conversion for display purposes only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (a + b * d.sqrt()) / c
    }

    fn common_radicand(&self, other: &Self) -> Result<BigInt, ExactError> {
        match (self.d.is_zero(), other.d.is_zero()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(ExactError::UnsupportedField(self.d.clone(), other.d.clone())),
        }
    }

    /// True when `self` and `other` can be combined without leaving one field.
    pub fn same_field(&self, other: &Self) -> bool {
        self.common_radicand(other).is_ok()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        Self::in_field(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            d,
        )
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_radicand(other)?;
        Self::in_field(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            d,
        )
    }

    /// Multiplicative inverse via the field conjugate.
    pub fn recip(&self) -> Result<Self, ExactError> {
        // c / (a + b√D) = c (a − b√D) / (a² − b² D); the norm is nonzero
        // because D is not a square.
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        if norm.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Self::in_field(&self.c * &self.a, -(&self.c * &self.b), norm, self.d.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.common_radicand(other)?;
        self.checked_mul(&other.recip()?)
    }

    pub fn neg(&self) -> Self {
        ExactReal {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::in_field(
            &self.a * r.numer(),
            &self.b * r.numer(),
            &self.c * r.denom(),
            self.d.clone(),
        )
        .expect("denominators are nonzero")
    }

    pub fn scale_int(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        Self::in_field(&self.a * &k, &self.b * &k, self.c.clone(), self.d.clone())
            .expect("denominator is nonzero")
    }

    /// Sign of `a + b*sqrt(D)`, which is the sign of the value since `c > 0`.
    pub fn signum(&self) -> Ordering {
        sign_of_surd(&self.a, &self.b, &self.d)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact trichotomy. Errors when both sides are irrational in different fields.
    pub fn compare(&self, other: &Self) -> Result<Ordering, ExactError> {
        Ok(self.checked_sub(other)?.signum())
    }

    /// `floor(self)`.
    pub fn floor(&self) -> BigInt {
        // floor(a + b√D) is a + floor(b√D); for a positive integer c,
        // floor(y / c) = floor(floor(y) / c).
        let int_part = &self.a + floor_of_b_sqrt_d(&self.b, &self.d);
        int_part.div_floor(&self.c)
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    /// `floor(m * self)`, never ambiguous for irrational values.
    pub fn floor_scaled(&self, m: u64) -> BigInt {
        let m = BigInt::from(m);
        let int_part = &self.a * &m + floor_of_b_sqrt_d(&(&self.b * &m), &self.d);
        int_part.div_floor(&self.c)
    }

    /// Fractional part `self - floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self.checked_sub(&Self::from_integer(self.floor()))
            .expect("integers live in every field")
    }
}

fn sign_of_surd(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign();
    let sb = if d.is_zero() { Sign::NoSign } else { b.sign() };
    match (sa, sb) {
        (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
        (Sign::Plus, Sign::Plus | Sign::NoSign) | (Sign::NoSign, Sign::Plus) => Ordering::Greater,
        (Sign::Minus, Sign::Minus | Sign::NoSign) | (Sign::NoSign, Sign::Minus) => Ordering::Less,
        // opposite signs: compare a² with b²D
        (Sign::Plus, Sign::Minus) => (a * a).cmp(&(b * b * d)),
        (Sign::Minus, Sign::Plus) => (b * b * d).cmp(&(a * a)),
    }
}

/// `floor(b * sqrt(d))` for non-square `d` (or `d == 0`).
fn floor_of_b_sqrt_d(b: &BigInt, d: &BigInt) -> BigInt {
    if b.is_zero() || d.is_zero() {
        return BigInt::zero();
    }
    let root = (b * b * d).sqrt();
    if b.is_positive() {
        root
    } else if &root * &root == b * b * d {
        -root
    } else {
        -root - 1
    }
}

impl Default for ExactReal {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for ExactReal {
    fn from(r: BigRational) -> Self {
        Self::from_rational(&r)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(
                f,
                "({}{}{}*sqrt({}))/{}",
                self.a,
                sign,
                self.b.abs(),
                self.d,
                self.c
            )
        }
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (~{:.6})", self.to_f64())
    }
}

// Grammar (whitespace ignored):
//   number := linear | '(' linear ')' '/' int
//   linear := term (('+' | '-') term)*     with at most one sqrt term
//   term   := int | [int '*'] 'sqrt(' int ')'
//   and a bare `int '/' int` rational.
struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
    original: &'s str,
}

impl<'s> Parser<'s> {
    fn err(&self, why: &'static str) -> ExactError {
        ExactError::Parse(self.original.to_string(), why)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt, ExactError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    /// Returns (rational part, sqrt coefficient, radicand).
    fn linear(&mut self) -> Result<(BigInt, BigInt, BigInt), ExactError> {
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        let mut d = BigInt::zero();
        let mut seen_sqrt = false;
        let mut first = true;
        loop {
            let negative = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                break;
            };
            first = false;
            let coeff = if self.eat_str("sqrt(") {
                None
            } else {
                let k = self.uint()?;
                if self.eat(b'*') {
                    if !self.eat_str("sqrt(") {
                        return Err(self.err("expected sqrt( after '*'"));
                    }
                    Some((k, true))
                } else {
                    Some((k, false))
                }
            };
            let (k, is_sqrt) = match coeff {
                None => (BigInt::one(), true),
                Some(pair) => pair,
            };
            let k = if negative { -k } else { k };
            if is_sqrt {
                if seen_sqrt {
                    return Err(self.err("more than one sqrt term"));
                }
                seen_sqrt = true;
                d = self.uint()?;
                if !self.eat(b')') {
                    return Err(self.err("unclosed sqrt("));
                }
                b = k;
            } else {
                a += k;
            }
        }
        Ok((a, b, d))
    }

    fn number(&mut self) -> Result<ExactReal, ExactError> {
        let (a, b, d, c) = if self.eat(b'(') {
            let (a, b, d) = self.linear()?;
            if !self.eat(b')') {
                return Err(self.err("unclosed parenthesis"));
            }
            let c = if self.eat(b'/') {
                self.uint()?
            } else {
                BigInt::one()
            };
            (a, b, d, c)
        } else {
            let (a, b, d) = self.linear()?;
            let c = if self.eat(b'/') {
                if !b.is_zero() {
                    return Err(self.err("parenthesize a surd before dividing"));
                }
                self.uint()?
            } else {
                BigInt::one()
            };
            (a, b, d, c)
        };
        if self.pos != self.src.len() {
            return Err(self.err("trailing characters"));
        }
        ExactReal::new(a, b, c, d)
    }
}

impl FromStr for ExactReal {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ExactError::Parse(s.to_string(), "empty"));
        }
        let mut p = Parser {
            src: compact.as_bytes(),
            pos: 0,
            original: s,
        };
        p.number()
    }
}

impl Serialize for ExactReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter for `BigRational` fields written as `"p/q"` strings.
/// Integers are also accepted on input.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigRational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(i) => Ok(BigRational::from_integer(i.into())),
            Repr::Str(s) => parse_rational(&s).map_err(serde::de::Error::custom),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let x: ExactReal = s.parse()?;
    x.to_rational()
        .ok_or(ExactError::Parse(s.to_string(), "expected a rational number"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn er(a: i64, b: i64, c: i64, d: i64) -> ExactReal {
        ExactReal::new(a, b, c, d).unwrap()
    }

    fn sqrt2_minus_1() -> ExactReal {
        er(-1, 1, 1, 2)
    }

    #[test]
    fn make_examples() {
        let x = sqrt2_minus_1();
        assert!(x.is_irrational());
        assert!((x.to_f64() - 0.41421).abs() < 1e-5);

        let half = er(2, 0, 4, 0);
        assert!(half.is_rational());
        assert_eq!(half, er(1, 0, 2, 0));

        let two = er(0, 2, 2, 4);
        assert!(two.is_rational());
        assert_eq!(two, ExactReal::from_integer(2));
    }

    #[test]
    fn perfect_square_folding_agrees_to_30_digits() {
        // oracle: 10^30 * (0 + 2*sqrt(4))/2 evaluated with an integer square root
        let scale = BigInt::from(10).pow(30);
        let raw = (BigInt::from(2) * (BigInt::from(4) * &scale * &scale).sqrt()) / BigInt::from(2);
        let folded = er(0, 2, 2, 4);
        assert_eq!(folded.floor_scaled(10u64.pow(15)) * BigInt::from(10).pow(15), raw);
    }

    #[test]
    fn division_by_zero_rejected() {
        assert_eq!(ExactReal::new(1, 1, 0, 2), Err(ExactError::DivisionByZero));
        assert!(matches!(
            ExactReal::new(1, 1, 1, -2),
            Err(ExactError::NegativeRadicand(_))
        ));
    }

    #[test]
    fn normalization_absorbs_sign_and_square_factors() {
        let x = er(2, -2, -4, 8); // (-2 + 2*sqrt(8))/4 = (-1 + 2*sqrt(2))/2
        assert_eq!(x, er(-1, 2, 2, 2));
        assert_eq!(x.c(), &BigInt::from(2));
        assert_eq!(x.radicand(), &BigInt::from(2));
        assert_eq!(er(0, 3, 1, 9), ExactReal::from_integer(9));
        assert!(!er(0, 3, 1, 9).is_irrational());
    }

    #[test]
    fn compare_examples() {
        // oracle: (sqrt2 - 1)^2 = 3 - 2 sqrt2 < 1/4  <=>  11/4 < 2 sqrt2  <=>  121 < 128
        assert_eq!(
            sqrt2_minus_1().compare(&er(1, 0, 2, 0)).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            sqrt2_minus_1().compare(&sqrt2_minus_1()).unwrap(),
            Ordering::Equal
        );
        // 9/4 > 2
        assert_eq!(
            er(3, 0, 2, 0).compare(&ExactReal::sqrt(2).unwrap()).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let e = ExactReal::sqrt(2)
            .unwrap()
            .compare(&ExactReal::sqrt(3).unwrap());
        assert!(matches!(e, Err(ExactError::UnsupportedField(_, _))));
        // sqrt(8) is 2 sqrt(2), so this is the same field
        assert!(ExactReal::sqrt(8)
            .unwrap()
            .compare(&ExactReal::sqrt(2).unwrap())
            .is_ok());
    }

    #[test]
    fn floor_scaled_examples() {
        // 0 < sqrt2 - 1 < 1 since 1 < 2 < 4
        assert_eq!(sqrt2_minus_1().floor_scaled(1), BigInt::from(0));
        // 16 < 18 < 25 => 4 < 3 sqrt2 < 5 => 1 < 3 sqrt2 - 3 < 2
        assert_eq!(sqrt2_minus_1().floor_scaled(3), BigInt::from(1));
        assert_eq!(er(1, 0, 2, 0).floor_scaled(4), BigInt::from(2));
    }

    #[test]
    fn floor_of_negative_surds() {
        assert_eq!(er(0, -1, 1, 2).floor(), BigInt::from(-2));
        assert_eq!(er(1, -1, 1, 2).floor(), BigInt::from(-1));
        assert_eq!(er(-7, 0, 2, 0).floor(), BigInt::from(-4));
        assert_eq!(er(-7, 0, 2, 0).ceil(), BigInt::from(-3));
    }

    #[test]
    fn reciprocal_and_division() {
        let x = sqrt2_minus_1();
        // 1/(sqrt2 - 1) = sqrt2 + 1
        assert_eq!(x.recip().unwrap(), er(1, 1, 1, 2));
        assert_eq!(x.checked_div(&x).unwrap(), ExactReal::one());
        assert_eq!(ExactReal::zero().recip(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn display_and_parse() {
        let cases = [
            ("(-1+1*sqrt(2))/1", er(-1, 1, 1, 2)),
            ("(3-2*sqrt(5))/7", er(3, -2, 7, 5)),
            ("1/2", er(1, 0, 2, 0)),
            ("-4", ExactReal::from_integer(-4)),
        ];
        for (text, value) in cases {
            assert_eq!(value.to_string(), text);
            assert_eq!(text.parse::<ExactReal>().unwrap(), value);
        }
        assert_eq!("sqrt(2) - 1".parse::<ExactReal>().unwrap(), er(-1, 1, 1, 2));
        assert_eq!(
            "( -1 + 1*sqrt(2) ) / 3".parse::<ExactReal>().unwrap(),
            er(-1, 1, 3, 2)
        );
        assert_eq!("-sqrt(3)".parse::<ExactReal>().unwrap(), er(0, -1, 1, 3));
        for bad in ["", "1/0", "sqrt(2)/2", "1+sqrt(2)+sqrt(3)", "(1+sqrt(2)", "abc"] {
            assert!(bad.parse::<ExactReal>().is_err(), "{bad}");
        }
    }

    #[test]
    fn json_string_form() {
        let x = er(-1, 1, 1, 2);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"(-1+1*sqrt(2))/1\"");
        let back: ExactReal = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
