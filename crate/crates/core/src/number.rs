//! Integer and rational helpers shared by the exact modules.
//!
//! Orders and exponents are arbitrary-precision: the lcm of the orders of a
//! modest prefix of roots of unity already overflows 64 bits.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A natural number or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cardinal {
    Finite(BigUint),
    Infinite,
}

impl Cardinal {
    pub fn finite(n: impl Into<BigUint>) -> Self {
        Cardinal::Finite(n.into())
    }

    pub fn zero() -> Self {
        Cardinal::Finite(BigUint::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Cardinal::Finite(n) if n.is_zero())
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            Cardinal::Finite(n) => Some(n),
            Cardinal::Infinite => None,
        }
    }

    /// Infinity absorbs.
    pub fn add(&self, other: &Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => Cardinal::Finite(a + b),
            _ => Cardinal::Infinite,
        }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cardinal::Finite(n) => big_uint::serialize(n, s),
            Cardinal::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Cardinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match IntRepr::deserialize(d)? {
            IntRepr::Small(n) => Ok(Cardinal::Finite(BigUint::from(n))),
            IntRepr::Text(t) if t == "inf" => Ok(Cardinal::Infinite),
            IntRepr::Text(t) => t
                .parse::<BigUint>()
                .map(Cardinal::Finite)
                .map_err(|_| de::Error::custom(format!("expected natural number or \"inf\", got {t:?}"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(u64),
    Text(String),
}

/// Serde adapter: JSON number when the value fits in `u64`, decimal string otherwise.
pub mod big_uint {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        match n.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&n.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        match IntRepr::deserialize(d)? {
            IntRepr::Small(n) => Ok(BigUint::from(n)),
            IntRepr::Text(t) => {
                t.parse::<BigUint>().map_err(|_| de::Error::custom(format!("expected natural number, got {t:?}")))
            }
        }
    }
}

/// Same as [`big_uint`] for optional fields.
pub mod opt_big_uint {
    use super::*;

    pub fn serialize<S: Serializer>(n: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match n {
            Some(v) => big_uint::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigUint>, D::Error> {
        match Option::<IntRepr>::deserialize(d)? {
            None => Ok(None),
            Some(IntRepr::Small(n)) => Ok(Some(BigUint::from(n))),
            Some(IntRepr::Text(t)) => t
                .parse::<BigUint>()
                .map(Some)
                .map_err(|_| de::Error::custom(format!("expected natural number, got {t:?}"))),
        }
    }
}

/// Rational numbers travel as `"a/b"` strings (or plain integers).
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(BigRational::from_integer(n.into())),
            Repr::Text(t) => parse_rational(&t).map_err(de::Error::custom),
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigUint>) -> BigUint {
    values.into_iter().fold(BigUint::one(), |acc, v| acc.lcm(v))
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// `floor(a + b·√2)` for rational `a` and nonzero integer `b`, computed exactly.
pub fn floor_sqrt2_affine(a: &BigRational, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_zero());
    let den = a.denom().clone();
    let c = &den * b;
    // c·√2 is irrational, so its floor is isqrt(2c²) shifted by the sign.
    let root = (BigInt::from(2) * &c * &c).sqrt();
    let floor_c_sqrt2 = if c.sign() == Sign::Minus { -root - 1 } else { root };
    (a.numer() + floor_c_sqrt2).div_floor(&den)
}

/// `a + b·√2` as a float with relative accuracy even when the two terms cancel.
pub fn sqrt2_affine_f64(a: &BigRational, b: &BigInt) -> f64 {
    let af = a.to_f64().unwrap_or(0.0);
    let bf = b.to_f64().unwrap_or(0.0) * std::f64::consts::SQRT_2;
    if b.is_zero() {
        return af;
    }
    if a.is_zero() || (a.is_negative() == b.is_negative()) {
        return af + bf;
    }
    // a and b·√2 have opposite signs: use (2b² − a²) / (b·√2 − a).
    let numer = BigRational::from_integer(BigInt::from(2) * b * b) - a * a;
    let denom = bf - af;
    numer.to_f64().unwrap_or(f64::NAN) / denom
}
