//! Exact rationals extended with `±∞`.
//!
//! All conjugate-side algebra uses a single sign convention in which `-∞`
//! wins every conflict: `(+∞) + (-∞) = (+∞) - (+∞) = (-∞) - (-∞) = -∞`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Arbitrary-precision reduced fraction with positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"-0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let mut n = BigInt::from_str(&digits).map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Renders `p/q`, or just `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// An element of `ℝ ∪ {±∞}` with exact finite part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtReal {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ExtReal::Finite(int(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::Finite(q) => ExtReal::Finite(-q),
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<Rational> for ExtReal {
    fn from(q: Rational) -> Self {
        ExtReal::Finite(q)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

/// Sum under the `-∞`-priority convention.
pub fn add_lower(a: &ExtReal, b: &ExtReal) -> ExtReal {
    use ExtReal::*;
    match (a, b) {
        (NegInf, _) | (_, NegInf) => NegInf,
        (PosInf, _) | (_, PosInf) => PosInf,
        (Finite(x), Finite(y)) => Finite(x + y),
    }
}

/// `add_lower(a, -b)`; in particular `∞ - ∞ = -∞` for either sign.
pub fn sub_lower(a: &ExtReal, b: &ExtReal) -> ExtReal {
    add_lower(a, &b.neg())
}

/// Nonnegative scaling. `0 · (±∞) = 0`, matching the dropped-zero multiplier
/// convention.
pub fn scale(a: &ExtReal, q: &Rational) -> Result<ExtReal, Error> {
    if q.is_negative() {
        return Err(Error::Invalid(format!(
            "negative scale factor {}",
            format_rational(q)
        )));
    }
    if q.is_zero() {
        return Ok(ExtReal::zero());
    }
    Ok(match a {
        ExtReal::Finite(x) => ExtReal::Finite(x * q),
        other => other.clone(),
    })
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(q) => f.write_str(&format_rational(q)),
        }
    }
}

impl FromStr for ExtReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "+inf" | "inf" | "+infinity" | "infinity" => Ok(ExtReal::PosInf),
            "-inf" | "-infinity" => Ok(ExtReal::NegInf),
            other => parse_rational(other).map(ExtReal::Finite),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Accepts either a JSON string or a JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Text(String),
    Int(i64),
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match ScalarRepr::deserialize(deserializer)? {
            ScalarRepr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            ScalarRepr::Int(n) => Ok(ExtReal::from_int(n)),
        }
    }
}

/// Serde adapter for plain [`Rational`] fields using the `"p/q"` syntax.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match ScalarRepr::deserialize(d)? {
            ScalarRepr::Text(s) => parse_rational(&s).map_err(serde::de::Error::custom),
            ScalarRepr::Int(n) => Ok(int(n)),
        }
    }
}
