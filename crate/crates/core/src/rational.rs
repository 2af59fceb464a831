//! Exact rationals and their canonical `p/q` string form.

use alloc::string::{String, ToString};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Canonical string: gcd-reduced, sign on the numerator, and integers
/// written without a denominator (`"-9/19"`, `"0"`, `"9"`).
pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn parse(s: &str) -> Result<Rational, Error> {
    let err = |reason| Error::Parse { input: s.to_string(), reason };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| err("numerator is not an integer"))?;
    let d = BigInt::from_str(den).map_err(|_| err("denominator is not an integer"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// True when `r` is an integer that is a perfect square (0 counts).
pub fn is_square_integer(r: &Rational) -> bool {
    if !r.is_integer() || r.is_negative() {
        return false;
    }
    let n = r.to_integer();
    let root = n.sqrt();
    &root * &root == n
}

pub(crate) fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn one() -> Rational {
    Rational::one()
}
