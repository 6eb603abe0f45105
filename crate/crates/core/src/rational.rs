//! The scalar type of the crate: arbitrary-precision rationals.
//!
//! `Rational` is kept in canonical reduced form (positive denominator,
//! coprime numerator/denominator) by construction, and all arithmetic is
//! exact. Rationals render as `num` or `num/den`, never as decimals, and
//! [`parse_rational`] accepts exactly those two shapes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^exp` with the convention `0^0 = 1`.
pub fn rat_pow(base: &Rational, exp: u32) -> Rational {
    if exp == 0 {
        return Rational::one();
    }
    // numer/denom are coprime, so their powers are too; new_raw keeps
    // the canonical form without a gcd pass.
    Rational::new_raw(base.numer().pow(exp), base.denom().pow(exp))
}

/// `base^exp` over the integers, with `0^0 = 1`.
pub fn int_pow(base: u32, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parse `num` or `num/den` (optionally signed) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |t: &str| -> Result<BigInt, ParseRationalError> {
        t.parse::<BigInt>()
            .map_err(|_| ParseRationalError::BadInteger(t.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Render in the same grammar `parse_rational` reads: `num` or `num/den`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True if `q` is a nonnegative integer.
pub fn is_nonneg_integer(q: &Rational) -> bool {
    q.is_integer() && !q.is_negative()
}
