//! Exact rational helpers shared by every module.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `2^k` as a rational.
pub fn pow2(k: usize) -> Rational {
    Rational::from_integer(BigInt::one() << k)
}

/// Parses `"p/q"`, an integer literal, or a finite decimal such as `"0.7"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if s.contains('/') || frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let numer =
            BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    let value = Rational::from_str(s).map_err(|_| bad())?;
    Ok(value)
}

/// Renders `value` rounded half away from zero to `digits` fractional digits.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut units = q;
    if r * 2 >= *scaled.denom() {
        units += 1;
    }
    let (whole, frac) = units.div_rem(&scale);
    let sign = if value.is_negative() && !units_is_zero(&whole, &frac) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!(
        "{sign}{whole}.{:0>width$}",
        frac.to_string(),
        width = digits
    )
}

fn units_is_zero(whole: &BigInt, frac: &BigInt) -> bool {
    whole.is_zero() && frac.is_zero()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// A rational that serializes as `"p/q"` (or an integer literal) and accepts
/// strings or JSON integers on input.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalString(pub Rational);

impl From<Rational> for RationalString {
    fn from(value: Rational) -> Self {
        RationalString(value)
    }
}

impl From<&Rational> for RationalString {
    fn from(value: &Rational) -> Self {
        RationalString(value.clone())
    }
}

impl fmt::Display for RationalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for RationalString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl de::Visitor<'_> for Visitor {
            type Value = RationalString;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                parse_rational(v).map(RationalString).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(RationalString(int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(RationalString(Rational::from_integer(BigInt::from(v))))
            }
        }
        deserializer.deserialize_any(Visitor)
    }
}

pub fn to_strings(values: &[Rational]) -> Vec<RationalString> {
    values.iter().map(RationalString::from).collect()
}

pub fn from_strings(values: Vec<RationalString>) -> Vec<Rational> {
    values.into_iter().map(|v| v.0).collect()
}
