//! Exact real literals.
//!
//! Reals are carried as rationals. Decimal and `p/q` literals are exact;
//! `sqrt(k)` is truncated to [`SQRT_DIGITS`] decimal digits, far below any
//! tolerance used by the relation search.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub const SQRT_DIGITS: u32 = 100;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericError {
    #[error("cannot parse real literal {0:?}")]
    Syntax(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("square root of negative number in {0:?}")]
    NegativeSqrt(String),
}

fn ten_pow(e: u32) -> BigInt {
    BigInt::from(10).pow(e)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: BigInt = all.parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let value = if scale >= 0 {
        BigRational::from_integer(numer * ten_pow(scale as u32))
    } else {
        BigRational::new(numer, ten_pow(scale.unsigned_abs()))
    };
    Some(value * BigInt::from(sign))
}

fn parse_plain(s: &str) -> Result<BigRational, NumericError> {
    let err = || NumericError::Syntax(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_decimal(p.trim()).ok_or_else(err)?;
        let q = parse_decimal(q.trim()).ok_or_else(err)?;
        if q.is_zero() {
            return Err(NumericError::ZeroDenominator(s.to_string()));
        }
        return Ok(p / q);
    }
    parse_decimal(s).ok_or_else(err)
}

/// Parses `1.25`, `-3`, `2e-5`, `7/3`, `sqrt(2)`, `-sqrt(5/4)`.
pub fn parse_real(s: &str) -> Result<BigRational, NumericError> {
    let t = s.trim();
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) if rest.trim_start().starts_with("sqrt") => (true, rest.trim_start()),
        _ => (false, t),
    };
    if let Some(inner) = body.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let radicand = parse_plain(inner.trim())?;
        if radicand.is_negative() {
            return Err(NumericError::NegativeSqrt(s.to_string()));
        }
        let root = sqrt_rational(&radicand, SQRT_DIGITS);
        return Ok(if negative { -root } else { root });
    }
    parse_plain(t)
}

/// `floor(sqrt(r) * 10^digits) / 10^digits` for `r >= 0`.
pub fn sqrt_rational(r: &BigRational, digits: u32) -> BigRational {
    assert!(!r.is_negative(), "sqrt of a negative rational");
    let scale = ten_pow(digits);
    let scaled = (r.numer() * &scale * &scale) / r.denom();
    BigRational::new(scaled.sqrt(), scale)
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Ceiling of the square root of a nonnegative rational, as a rational with
/// denominator one; an upper bound usable in exact comparisons.
pub fn sqrt_upper(r: &BigRational) -> BigRational {
    let c = r.ceil().to_integer();
    let s = c.sqrt();
    let s = if &s * &s < c { s + BigInt::one() } else { s };
    BigRational::from_integer(s)
}
