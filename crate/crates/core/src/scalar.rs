//! Arithmetic used by every oracle.
//!
//! Exact backends compute in arbitrary-precision rationals and compare
//! exactly. The pmf backend computes in `f64` and every comparison goes
//! through [`TOLERANCE`]. Code generic over [`Scalar`] must never use `==`
//! or `<` directly on values; use the `tol_*` methods instead.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for every floating-point comparison in the library.
pub const TOLERANCE: f64 = 1e-9;

/// Candidate breakpoints closer than this are merged on float backends.
pub const BREAKPOINT_SNAP: f64 = 1e-7;

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Sum
{
    const EXACT: bool;

    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn to_number(&self) -> Number;

    /// Three-way comparison; `Equal` when within tolerance.
    fn tol_cmp(&self, other: &Self) -> Ordering;

    fn tol_eq(&self, other: &Self) -> bool {
        self.tol_cmp(other) == Ordering::Equal
    }
    fn tol_lt(&self, other: &Self) -> bool {
        self.tol_cmp(other) == Ordering::Less
    }
    fn tol_le(&self, other: &Self) -> bool {
        self.tol_cmp(other) != Ordering::Greater
    }
    fn tol_gt(&self, other: &Self) -> bool {
        self.tol_cmp(other) == Ordering::Greater
    }

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    fn midpoint(&self, other: &Self) -> Self {
        (self.clone() + other.clone()) / Self::from_i64(2)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_number(&self) -> Number {
        Number::Exact(self.clone())
    }
    fn tol_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_number(&self) -> Number {
        Number::Float(*self)
    }
    fn tol_cmp(&self, other: &Self) -> Ordering {
        if (self - other).abs() <= TOLERANCE {
            Ordering::Equal
        } else if self < other {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// A value leaving the generic core: exact or floating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => Scalar::to_f64(r),
            Number::Float(f) => *f,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => write!(f, "{}", format_rational(r)),
            // Debug keeps a decimal point so the value re-parses as a float.
            Number::Float(v) => write!(f, "{v:?}"),
        }
    }
}

impl From<Number> for String {
    fn from(n: Number) -> String {
        n.to_string()
    }
}

impl TryFrom<String> for Number {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
            s.parse::<f64>()
                .map(Number::Float)
                .map_err(|_| Error::BadRational(s))
        } else {
            parse_rational(&s).map(Number::Exact)
        }
    }
}

/// `7/3`, `-2`, `0`. Integers print without a denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or an integer literal. Denominators must be positive.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if !d.is_positive() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => BigInt::from_str(t).map(BigRational::from_integer).map_err(|_| bad()),
    }
}

/// Like [`parse_rational`] but also accepts finite decimals (`1.5`, `-0.25`),
/// converted exactly.
pub fn parse_rational_or_decimal(s: &str) -> Result<Rational> {
    let t = s.trim();
    let Some((int, frac)) = t.split_once('.') else {
        return parse_rational(t);
    };
    let bad = || Error::BadRational(s.to_string());
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 60 {
        return Err(bad());
    }
    let negative = int.starts_with('-');
    let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
    let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(numer, denom);
    Ok(if negative { -r } else { r })
}

/// Parses a threshold for the given arithmetic.
pub fn parse_scalar<S: Scalar>(s: &str) -> Result<S> {
    if S::EXACT {
        return parse_rational_or_decimal(s).map(|r| S::from_rational(&r));
    }
    match parse_rational_or_decimal(s) {
        Ok(r) => Ok(S::from_rational(&r)),
        Err(e) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(|v| S::from_rational(&float_to_rational(v)))
            .ok_or(e),
    }
}

fn float_to_rational(v: f64) -> Rational {
    BigRational::from_float(v).unwrap_or_else(<BigRational as num_traits::Zero>::zero)
}

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn one() -> Rational {
    BigRational::one()
}
