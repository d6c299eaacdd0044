//! Exact rational exponents, extended endpoints and distances.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational used for lengths, integrals and distances.
pub type Rational = BigRational;

/// An exact rational exponent (equivalently a filtration level).
///
/// Always stored in lowest terms with a positive denominator, so derived
/// equality and ordering are exact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Exponent(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Exponent(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Exponent(BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Exponent(r)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Exponent(self.0.abs())
    }

    /// Representative of `self` modulo `r` in `[0, r)`. Requires `r > 0`.
    pub fn rem_euclid(&self, r: &Exponent) -> Exponent {
        let q = (&self.0 / &r.0).floor();
        Exponent(&self.0 - q * &r.0)
    }

    pub fn max(self, other: Exponent) -> Exponent {
        std::cmp::max(self, other)
    }

    pub fn min(self, other: Exponent) -> Exponent {
        std::cmp::min(self, other)
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::int(n)
    }
}

impl From<BigRational> for Exponent {
    fn from(r: BigRational) -> Self {
        Exponent(r)
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Exponent> for &'a Exponent {
    type Output = Exponent;
    fn add(self, rhs: &Exponent) -> Exponent {
        Exponent(&self.0 + &rhs.0)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a Exponent> for &'a Exponent {
    type Output = Exponent;
    fn sub(self, rhs: &Exponent) -> Exponent {
        Exponent(&self.0 - &rhs.0)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-&self.0)
    }
}

impl Mul<i64> for &Exponent {
    type Output = Exponent;
    fn mul(self, rhs: i64) -> Exponent {
        Exponent(&self.0 * BigRational::from_integer(BigInt::from(rhs)))
    }
}

/// Renders `3`, `-1/2`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"3"`, `"-1/2"` or a finite decimal such as `"0.25"`, exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if !ip.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp)
            .parse()
            .map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(digits, den);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_rational(s).map(Exponent)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => Ok(Exponent::int(n.as_i64().unwrap())),
            other => Err(serde::de::Error::custom(format!(
                "expected exponent string like \"-1/2\", got {other}"
            ))),
        }
    }
}

/// Right endpoint of a bar: a finite level or `+∞`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Endpoint {
    Finite(Exponent),
    Infinite,
}

impl Endpoint {
    pub fn finite(&self) -> Option<&Exponent> {
        match self {
            Endpoint::Finite(e) => Some(e),
            Endpoint::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Endpoint::Infinite)
    }
}

impl From<Exponent> for Endpoint {
    fn from(e: Exponent) -> Self {
        Endpoint::Finite(e)
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Finite(e) => write!(f, "{e}"),
            Endpoint::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Endpoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "inf" | "+inf" | "infinity" | "∞" => Ok(Endpoint::Infinite),
            other => other.parse().map(Endpoint::Finite),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => {
                Ok(Endpoint::Finite(Exponent::int(n.as_i64().unwrap())))
            }
            other => Err(serde::de::Error::custom(format!(
                "expected endpoint string, got {other}"
            ))),
        }
    }
}

/// A nonnegative exact distance, or the out-of-band value `INF`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Distance {
    Finite(Rational),
    Infinite,
}

impl Distance {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Distance::Finite(r) => Some(r),
            Distance::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Distance::Infinite)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(r) => f.write_str(&format_rational(r)),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Integer as an exact rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!("3".parse::<Exponent>().unwrap(), Exponent::int(3));
        assert_eq!("-1/2".parse::<Exponent>().unwrap(), Exponent::new(-1, 2));
        assert_eq!("2/4".parse::<Exponent>().unwrap(), Exponent::new(1, 2));
        assert_eq!("0.1".parse::<Exponent>().unwrap(), Exponent::new(1, 10));
        assert_eq!("-1.25".parse::<Exponent>().unwrap(), Exponent::new(-5, 4));
        assert_eq!(".5".parse::<Exponent>().unwrap(), Exponent::new(1, 2));
        assert!("1/0".parse::<Exponent>().is_err());
        assert!("inf".parse::<Exponent>().is_err());
        assert!("abc".parse::<Exponent>().is_err());
        assert!("1.".parse::<Exponent>().is_err());
    }

    #[test]
    fn display_is_reduced() {
        assert_eq!(Exponent::new(6, -4).to_string(), "-3/2");
        assert_eq!(Exponent::new(4, 2).to_string(), "2");
    }

    #[test]
    fn endpoint_order_puts_infinity_last() {
        let a = Endpoint::Finite(Exponent::int(1_000_000));
        assert!(a < Endpoint::Infinite);
        assert_eq!("inf".parse::<Endpoint>().unwrap(), Endpoint::Infinite);
    }

    #[test]
    fn rem_euclid_lands_in_range() {
        let r = Exponent::int(1);
        assert_eq!(Exponent::new(-1, 10).rem_euclid(&r), Exponent::new(9, 10));
        assert_eq!(Exponent::new(57, 10).rem_euclid(&r), Exponent::new(7, 10));
        assert_eq!(Exponent::int(3).rem_euclid(&r), Exponent::zero());
    }
}
