//! Exact points on the unit circle.
//!
//! A [`UnitScalar`] is `e^{2πit}` for a rotation number `t ∈ [0, 1)`. Rational
//! rotations are the roots of unity and carry an exact multiplicative order.
//! Irrational rotations can only be built from forms whose irrationality is
//! known symbolically; a float is never classified as irrational on its own.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::{self, floor_sqrt2_affine, format_rational, frac, sqrt2_affine_f64};

const TAU: f64 = std::f64::consts::TAU;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UnitScalar {
    Rational(RationalRotation),
    Irrational(IrrationalRotation),
}

/// `e^{2πip/q}` with `0 ≤ p < q` and `gcd(p, q) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalRotation {
    p: BigUint,
    q: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IrrationalRotation {
    form: IrrationalForm,
}

#[derive(Clone, Debug)]
pub enum IrrationalForm {
    /// `t = frac(offset + multiplier·√2)` with `offset ∈ [0, 1)` and `multiplier ≠ 0`.
    Sqrt2 { offset: BigRational, multiplier: BigInt },
    /// `t = frac(multiplier · approx)` for a caller-asserted irrational `approx`.
    Declared { provenance: String, approx: f64, multiplier: i64 },
}

impl PartialEq for IrrationalForm {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                IrrationalForm::Sqrt2 { offset: a, multiplier: m },
                IrrationalForm::Sqrt2 { offset: b, multiplier: n },
            ) => a == b && m == n,
            (
                IrrationalForm::Declared { provenance: p, approx: a, multiplier: m },
                IrrationalForm::Declared { provenance: q, approx: b, multiplier: n },
            ) => p == q && a.to_bits() == b.to_bits() && m == n,
            _ => false,
        }
    }
}

impl Eq for IrrationalForm {}

impl std::hash::Hash for IrrationalForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            IrrationalForm::Sqrt2 { offset, multiplier } => {
                0u8.hash(state);
                offset.hash(state);
                multiplier.hash(state);
            }
            IrrationalForm::Declared { provenance, approx, multiplier } => {
                1u8.hash(state);
                provenance.hash(state);
                approx.to_bits().hash(state);
                multiplier.hash(state);
            }
        }
    }
}

/// Result of snapping a scalar to the `2^n`-th roots of unity.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicSnap {
    pub level: u32,
    /// Index in `[0, 2^level)` of the nearest root `e^{2πik/2^level}`.
    pub k: BigUint,
    pub chord_distance: f64,
}

impl DyadicSnap {
    pub fn value(&self) -> UnitScalar {
        UnitScalar::from_parts(BigInt::from(self.k.clone()), BigUint::one() << self.level as usize)
    }
}

impl RationalRotation {
    pub fn numer(&self) -> &BigUint {
        &self.p
    }

    pub fn denom(&self) -> &BigUint {
        &self.q
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p.clone()), BigInt::from(self.q.clone()))
    }
}

impl IrrationalRotation {
    pub fn form(&self) -> &IrrationalForm {
        &self.form
    }
}

impl UnitScalar {
    /// The identity rotation `0/1`.
    pub fn one() -> Self {
        UnitScalar::Rational(RationalRotation { p: BigUint::zero(), q: BigUint::one() })
    }

    /// `e^{2πip/q}`; `p` is reduced modulo `q` and the fraction to lowest terms.
    pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let q: BigInt = q.into();
        if !q.is_positive() {
            return Err(Error::InvalidRotation(format!("denominator must be positive, got {q}")));
        }
        Ok(Self::from_parts(p.into(), q.to_biguint().expect("positive")))
    }

    fn from_parts(p: BigInt, q: BigUint) -> Self {
        let qi = BigInt::from(q);
        let p = p.mod_floor(&qi);
        let g = p.gcd(&qi);
        let (p, q) = if g.is_zero() { (p, qi) } else { (p / &g, qi / g) };
        UnitScalar::Rational(RationalRotation {
            p: p.to_biguint().expect("reduced numerator is non-negative"),
            q: q.to_biguint().expect("positive"),
        })
    }

    fn from_rational(t: &BigRational) -> Self {
        let t = frac(t);
        Self::from_parts(t.numer().clone(), t.denom().to_biguint().expect("positive"))
    }

    /// `e^{2πi·frac(offset + √2)}`, irrational for every rational offset.
    pub fn sqrt2_offset(offset: BigRational) -> Self {
        Self::sqrt2_form(offset, BigInt::one())
    }

    /// `e^{2πi·frac(offset + multiplier·√2)}`; the multiplier must be nonzero.
    pub fn sqrt2_multiple(offset: BigRational, multiplier: impl Into<BigInt>) -> Result<Self> {
        let multiplier = multiplier.into();
        if multiplier.is_zero() {
            return Err(Error::InvalidRotation("√2 multiplier must be nonzero".into()));
        }
        Ok(Self::sqrt2_form(offset, multiplier))
    }

    fn sqrt2_form(offset: BigRational, multiplier: BigInt) -> Self {
        UnitScalar::Irrational(IrrationalRotation { form: IrrationalForm::Sqrt2 { offset: frac(&offset), multiplier } })
    }

    /// A rotation the caller asserts to be irrational, tagged with where that claim comes from.
    pub fn declared_irrational(provenance: impl Into<String>, approx: f64) -> Result<Self> {
        let provenance = provenance.into();
        if !approx.is_finite() {
            return Err(Error::InvalidRotation(format!("non-finite rotation number {approx}")));
        }
        if provenance.is_empty() || provenance.contains(']') {
            return Err(Error::InvalidRotation(format!("bad provenance tag {provenance:?}")));
        }
        Ok(UnitScalar::Irrational(IrrationalRotation {
            form: IrrationalForm::Declared { provenance, approx: approx.rem_euclid(1.0), multiplier: 1 },
        }))
    }

    pub fn is_root_of_unity(&self) -> bool {
        matches!(self, UnitScalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&RationalRotation> {
        match self {
            UnitScalar::Rational(r) => Some(r),
            UnitScalar::Irrational(_) => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, UnitScalar::Rational(r) if r.p.is_zero())
    }

    /// Least `m ≥ 1` with `s^m = 1`: the reduced denominator.
    pub fn order(&self) -> Result<BigUint> {
        match self {
            UnitScalar::Rational(r) => Ok(r.q.clone()),
            UnitScalar::Irrational(_) => Err(Error::OrderUndefined(self.to_string())),
        }
    }

    pub fn pow(&self, k: i64) -> UnitScalar {
        if k == 0 {
            return UnitScalar::one();
        }
        match self {
            UnitScalar::Rational(r) => Self::from_parts(BigInt::from(r.p.clone()) * k, r.q.clone()),
            UnitScalar::Irrational(irr) => match &irr.form {
                IrrationalForm::Sqrt2 { offset, multiplier } => {
                    Self::sqrt2_form(offset * BigRational::from_integer(k.into()), multiplier * k)
                }
                IrrationalForm::Declared { provenance, approx, multiplier } => {
                    UnitScalar::Irrational(IrrationalRotation {
                        form: IrrationalForm::Declared {
                            provenance: provenance.clone(),
                            approx: *approx,
                            multiplier: multiplier.saturating_mul(k),
                        },
                    })
                }
            },
        }
    }

    /// Complex conjugate, i.e. rotation number `1 − t mod 1`.
    pub fn conj(&self) -> UnitScalar {
        match self {
            UnitScalar::Rational(r) => Self::from_parts(-BigInt::from(r.p.clone()), r.q.clone()),
            UnitScalar::Irrational(_) => self.pow(-1),
        }
    }

    /// Rotation number `t ∈ [0, 1)` as a float.
    pub fn rotation_f64(&self) -> f64 {
        let t = match self {
            UnitScalar::Rational(r) => r.to_rational().to_f64().unwrap_or(0.0),
            UnitScalar::Irrational(irr) => match &irr.form {
                IrrationalForm::Sqrt2 { offset, multiplier } => {
                    let whole = floor_sqrt2_affine(offset, multiplier);
                    sqrt2_affine_f64(&(offset - BigRational::from_integer(whole)), multiplier)
                }
                IrrationalForm::Declared { approx, multiplier, .. } => (*approx * *multiplier as f64).rem_euclid(1.0),
            },
        };
        if t >= 1.0 {
            t - 1.0
        } else {
            t.max(0.0)
        }
    }

    /// Signed rotation number in `(−1/2, 1/2]`, exact where the representation allows.
    fn centered_rotation(&self) -> f64 {
        match self {
            UnitScalar::Rational(r) => {
                let t = r.to_rational();
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                let t = if t > half { t - BigRational::one() } else { t };
                t.to_f64().unwrap_or(0.0)
            }
            UnitScalar::Irrational(irr) => match &irr.form {
                IrrationalForm::Sqrt2 { offset, multiplier } => {
                    // Nearest integer to offset + m√2, then the exact residual.
                    let half = BigRational::new(BigInt::one(), BigInt::from(2));
                    let nearest = floor_sqrt2_affine(&(offset + half), multiplier);
                    sqrt2_affine_f64(&(offset - BigRational::from_integer(nearest)), multiplier)
                }
                IrrationalForm::Declared { .. } => {
                    let t = self.rotation_f64();
                    if t > 0.5 {
                        t - 1.0
                    } else {
                        t
                    }
                }
            },
        }
    }

    /// `(cos 2πt, sin 2πt)`.
    pub fn to_complex(&self) -> Complex64 {
        if let UnitScalar::Rational(r) = self {
            // Quarter turns are exact.
            if let (Some(p), Some(q)) = (r.p.to_u8(), r.q.to_u8()) {
                match (p, q) {
                    (0, 1) => return Complex64::new(1.0, 0.0),
                    (1, 2) => return Complex64::new(-1.0, 0.0),
                    (1, 4) => return Complex64::new(0.0, 1.0),
                    (3, 4) => return Complex64::new(0.0, -1.0),
                    _ => {}
                }
            }
        }
        let (sin, cos) = (TAU * self.centered_rotation()).sin_cos();
        Complex64::new(cos, sin)
    }

    /// Nearest `2^n`-th root of unity and its chord distance.
    ///
    /// Exact midpoints between two candidates resolve to the smaller index `k`.
    pub fn nearest_dyadic(&self, n: u32) -> DyadicSnap {
        assert!(n >= 1, "dyadic level must be at least 1");
        let modulus = BigInt::one() << n as usize;
        let scale = BigRational::from_integer(modulus.clone());
        let (k_raw, delta) = match self {
            UnitScalar::Rational(r) => {
                let t = r.to_rational();
                let x = &t * &scale;
                let floor = x.floor();
                let rem = &x - &floor;
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                let floor: BigInt = floor.to_integer();
                let k = match rem.cmp(&half) {
                    Ordering::Less => floor,
                    Ordering::Greater => floor + 1,
                    Ordering::Equal => {
                        let lo = floor.mod_floor(&modulus);
                        let hi = (&floor + BigInt::one()).mod_floor(&modulus);
                        if hi < lo {
                            floor + 1
                        } else {
                            floor
                        }
                    }
                };
                let delta = t - BigRational::new(k.clone(), modulus.clone());
                (k, delta.to_f64().unwrap_or(0.0))
            }
            UnitScalar::Irrational(irr) => match &irr.form {
                IrrationalForm::Sqrt2 { offset, multiplier } => {
                    let half = BigRational::new(BigInt::one(), BigInt::from(2));
                    let scaled_m = multiplier * &modulus;
                    let k = floor_sqrt2_affine(&(offset * &scale + half), &scaled_m);
                    let residual = offset - BigRational::new(k.clone(), modulus.clone());
                    (k, sqrt2_affine_f64(&residual, multiplier))
                }
                IrrationalForm::Declared { .. } => {
                    let t = self.rotation_f64();
                    let m = 2f64.powi(n as i32);
                    let k = (t * m + 0.5).floor();
                    (BigInt::from(k as u64), t - k / m)
                }
            },
        };
        let k = k_raw.mod_floor(&modulus).to_biguint().expect("non-negative");
        let chord_distance = 2.0 * (std::f64::consts::PI * delta.abs()).sin();
        DyadicSnap { level: n, k, chord_distance }
    }

    /// The string form used in JSON for irrational rotations.
    pub fn formula(&self) -> String {
        match self {
            UnitScalar::Rational(r) => format!("{}/{}", r.p, r.q),
            UnitScalar::Irrational(irr) => match &irr.form {
                IrrationalForm::Sqrt2 { offset, multiplier } => {
                    format!("frac({} + {}*sqrt2)", format_rational(offset), multiplier)
                }
                IrrationalForm::Declared { provenance, approx, multiplier } => {
                    format!("frac({multiplier}*{approx:?})[declared:{provenance}]")
                }
            },
        }
    }

    fn parse_formula(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognised irrational formula {text:?}"));
        let text = text.trim();
        if let Some((head, tag)) = text.split_once("[declared:") {
            let provenance = tag.strip_suffix(']').ok_or_else(bad)?;
            let inner = head.trim().strip_prefix("frac(").and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
            let (m, approx) = inner.split_once('*').ok_or_else(bad)?;
            let multiplier: i64 = m.trim().parse().map_err(|_| bad())?;
            let approx: f64 = approx.trim().parse().map_err(|_| bad())?;
            if multiplier == 0 {
                return Err(bad());
            }
            let base = Self::declared_irrational(provenance, approx)?;
            return Ok(base.pow(multiplier));
        }
        let inner = text.strip_prefix("frac(").and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
        let (offset, sqrt_term) = match inner.split_once('+') {
            Some((a, b)) => (number::parse_rational(a)?, b.trim()),
            None => (BigRational::zero(), inner.trim()),
        };
        let multiplier: BigInt = if sqrt_term == "sqrt2" {
            BigInt::one()
        } else {
            let m = sqrt_term.strip_suffix("*sqrt2").ok_or_else(bad)?;
            m.trim().parse().map_err(|_| bad())?
        };
        Self::sqrt2_multiple(offset, multiplier)
    }
}

impl fmt::Display for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula())
    }
}

impl FromStr for UnitScalar {
    type Err = Error;

    /// Accepts `p/q`, an integer, or an irrational formula such as `frac(1/3 + 2*sqrt2)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with("frac(") {
            return Self::parse_formula(s);
        }
        let r = number::parse_rational(s)?;
        Ok(Self::from_rational(&r))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ScalarRepr {
    Rational {
        #[serde(with = "crate::number::big_uint")]
        p: BigUint,
        #[serde(with = "crate::number::big_uint")]
        q: BigUint,
    },
    Irrational {
        t_formula: String,
        t_approx: f64,
    },
}

impl Serialize for UnitScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            UnitScalar::Rational(r) => ScalarRepr::Rational { p: r.p.clone(), q: r.q.clone() },
            UnitScalar::Irrational(_) => {
                ScalarRepr::Irrational { t_formula: self.formula(), t_approx: self.rotation_f64() }
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ScalarRepr::deserialize(d)? {
            ScalarRepr::Rational { p, q } => {
                if q.is_zero() {
                    return Err(D::Error::custom("rotation denominator must be positive"));
                }
                Ok(Self::from_parts(BigInt::from(p), q))
            }
            ScalarRepr::Irrational { t_formula, t_approx } => {
                let s = Self::parse_formula(&t_formula).map_err(D::Error::custom)?;
                let t = s.rotation_f64();
                let gap = (t - t_approx).abs();
                if gap.min(1.0 - gap) > 1e-6 {
                    return Err(D::Error::custom(format!("t_approx {t_approx} disagrees with {t_formula} = {t}")));
                }
                Ok(s)
            }
        }
    }
}
