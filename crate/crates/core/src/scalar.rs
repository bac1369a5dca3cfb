//! Scalar fields used for structure constants and matrices.
//!
//! Two arithmetic modes exist: exact rationals ([`Rational`]) and `f64`.
//! An algebra, matrix or rack is built over exactly one of them, so the
//! mode is uniform within every value.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational number.
pub type Rational = BigRational;

/// Absolute tolerance used for zero tests in float mode.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Rational,
    Float64,
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    /// Zero test: exact equality in rational mode, `|x| <= FLOAT_TOL` in float mode.
    fn is_negligible(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Exact conversion for rationals (every finite double is dyadic).
    fn from_f64(x: f64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Parses a decimal or `num/den` literal.
    fn parse_literal(s: &str) -> Result<Self>;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn is_exact() -> bool {
        Self::MODE == ScalarMode::Rational
    }
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => ratio_to_f64_scaled(self),
        }
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(Rational::zero)
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn parse_literal(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn magnitude(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

fn ratio_to_f64_scaled(r: &Rational) -> f64 {
    // numerator or denominator overflow f64: shift both down by the same power of two
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float64;

    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_TOL
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn parse_literal(s: &str) -> Result<Self> {
        parse_float(s)
    }
}

/// Parses `"3"`, `"-2/5"` or an exact decimal such as `"0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = t.parse::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    parse_decimal(t).ok_or_else(|| Error::Parse(format!("not a rational literal: {s:?}")))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(digits, den);
    Some(if neg { -r } else { r })
}

/// Parses a float literal. Besides plain numbers and `num/den`, a trailing
/// multiple of pi is accepted: `"pi"`, `"0.9*pi"`, `"pi/2"`, `"-3*pi/4"`.
pub fn parse_float(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a float literal: {s:?}"));
    if t.contains("pi") {
        let (head, tail) = t.split_once("pi").ok_or_else(bad)?;
        let factor = match head.trim_end_matches('*').trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => parse_float(h)?,
        };
        let divisor = match tail.trim() {
            "" => 1.0,
            d => {
                let d = d.strip_prefix('/').ok_or_else(bad)?;
                parse_float(d)?
            }
        };
        return Ok(factor * std::f64::consts::PI / divisor);
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: f64 = n.trim().parse().map_err(|_| bad())?;
        let d: f64 = d.trim().parse().map_err(|_| bad())?;
        return Ok(n / d);
    }
    t.parse::<f64>().map_err(|_| bad())
}

/// Rounds `x` to the nearest multiple of `1/den` and returns it exactly.
/// Used by samplers that must emit small-denominator rationals.
pub fn snap<S: Scalar>(x: f64, den: i64) -> S {
    let n = (x * den as f64).round();
    match i64::from_f64(n) {
        Some(n) => S::from_ratio(n, den),
        None => S::zero(),
    }
}

/// Converts an `f64` vector into scalars.
pub fn vec_from_f64<S: Scalar>(v: &[f64]) -> Vec<S> {
    v.iter().map(|&x| S::from_f64(x)).collect()
}

pub fn vec_to_f64<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

pub(crate) fn max_abs<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).abs();
            if d.is_nan() {
                f64::INFINITY
            } else {
                d
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("-2/4").unwrap(), Rational::from_ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), <Rational as Scalar>::from_i64(7));
        assert_eq!(parse_rational("0.125").unwrap(), Rational::from_ratio(1, 8));
        assert_eq!(parse_rational("-.5").unwrap(), Rational::from_ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e3").is_err());
    }

    #[test]
    fn float_literals_with_pi() {
        let pi = std::f64::consts::PI;
        assert_eq!(parse_float("pi").unwrap(), pi);
        assert_eq!(parse_float("pi/2").unwrap(), pi / 2.0);
        assert_eq!(parse_float("0.9*pi").unwrap(), 0.9 * pi);
        assert_eq!(parse_float("-3*pi/4").unwrap(), -3.0 * pi / 4.0);
        assert_eq!(parse_float("1/4").unwrap(), 0.25);
        assert!(parse_float("pi/x").is_err());
    }

    #[test]
    fn dyadic_round_trip() {
        let x = 0.1_f64;
        let r = <Rational as Scalar>::from_f64(x);
        assert_eq!(Scalar::to_f64(&r), x);
        let s: Rational = snap(0.26, 4);
        assert_eq!(s, Rational::from_ratio(1, 4));
    }
}
