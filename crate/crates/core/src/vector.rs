//! Finite-support vectors with exact complex-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::{format_rational, parse_rational};
use crate::permutation::GroupedVector;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        ExactComplex { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        ExactComplex::real(BigRational::from_integer(n.into()))
    }

    pub fn i() -> Self {
        ExactComplex { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: ExactComplex) -> ExactComplex {
        ExactComplex { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: ExactComplex) -> ExactComplex {
        ExactComplex { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex { re: -self.re, im: -self.im }
    }
}

impl Mul for ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: ExactComplex) -> ExactComplex {
        ExactComplex { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => f.write_str(&format_rational(&self.re)),
            (true, false) => write!(f, "{}i", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", format_rational(&self.re), sign, format_rational(&self.im.abs()))
            }
        }
    }
}

/// Splits `a+b-c` into signed terms, ignoring signs inside parentheses.
fn signed_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut negative = false;
    let mut current = String::new();
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth -= 1;
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                } else if ch == '-' && negative {
                    return Err(Error::Parse(format!("doubled sign in {text:?}")));
                }
                negative = ch == '-';
            }
            _ => current.push(ch),
        }
    }
    if depth != 0 || current.is_empty() {
        return Err(Error::Parse(format!("malformed expression {text:?}")));
    }
    terms.push((negative, current));
    Ok(terms)
}

impl FromStr for ExactComplex {
    type Err = Error;

    /// `3`, `-1/2`, `i`, `2/3i`, `1/2+1/2i`, optionally parenthesized.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
        let mut total = ExactComplex::default();
        for (negative, term) in signed_terms(s)? {
            let value = match term.strip_suffix('i') {
                Some("") => ExactComplex::i(),
                Some(coef) => ExactComplex::new(BigRational::zero(), parse_rational(coef.trim_end_matches('*'))?),
                None => ExactComplex::real(parse_rational(&term)?),
            };
            total = if negative { total - value } else { total + value };
        }
        Ok(total)
    }
}

/// `Σ c_n e_n` over a finite support, indices from 1, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExactVector {
    coefficients: BTreeMap<u64, ExactComplex>,
}

impl ExactVector {
    pub fn zero() -> Self {
        ExactVector::default()
    }

    pub fn basis(n: u64) -> Result<Self> {
        ExactVector::from_terms([(n, ExactComplex::from_int(1))])
    }

    /// Repeated indices are summed; zero coefficients are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, ExactComplex)>) -> Result<Self> {
        let mut coefficients: BTreeMap<u64, ExactComplex> = BTreeMap::new();
        for (n, c) in terms {
            if n == 0 {
                return Err(Error::InvalidVector("basis indices start at 1".into()));
            }
            let entry = coefficients.entry(n).or_default();
            *entry = std::mem::take(entry) + c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        Ok(ExactVector { coefficients })
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.coefficients.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &ExactComplex)> {
        self.coefficients.iter().map(|(&n, c)| (n, c))
    }

    pub fn coefficient(&self, n: u64) -> Option<&ExactComplex> {
        self.coefficients.get(&n)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.coefficients.keys().next_back().copied()
    }

    pub fn add(&self, other: &ExactVector) -> ExactVector {
        let terms = self.terms().chain(other.terms()).map(|(n, c)| (n, c.clone()));
        ExactVector::from_terms(terms).expect("indices already valid")
    }

    /// Dense float copy of coordinates `1..=d`; indices past `d` are dropped.
    pub fn to_dense(&self, d: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for (n, c) in self.terms() {
            if (n as usize) <= d {
                out[n as usize - 1] = c.to_complex64();
            }
        }
        out
    }
}

impl fmt::Display for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (n, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c == ExactComplex::from_int(1) {
                write!(f, "e{n}")?;
            } else {
                write!(f, "{c}*e{n}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for ExactVector {
    type Err = Error;

    /// Shorthand such as `e2+e3`, `e2-e3`, `1/2*e4`, `i*e5` or `(1+i)*e1 - 3e2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(ExactVector::zero());
        }
        let mut terms = Vec::new();
        for (negative, term) in signed_terms(s)? {
            let split = term.rfind('e').ok_or_else(|| Error::Parse(format!("term {term:?} names no basis vector")))?;
            let n: u64 = term[split + 1..].parse().map_err(|_| Error::Parse(format!("bad basis index in {term:?}")))?;
            let coef = term[..split].trim_end_matches('*');
            let c = if coef.is_empty() { ExactComplex::from_int(1) } else { coef.parse()? };
            terms.push((n, if negative { -c } else { c }));
        }
        ExactVector::from_terms(terms)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    n: u64,
    #[serde(default = "BigRational::zero", with = "crate::number::rational")]
    re: BigRational,
    #[serde(default = "BigRational::zero", with = "crate::number::rational")]
    im: BigRational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<TermRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
}

impl Serialize for ExactVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.terms().map(|(n, c)| TermRepr { n, re: c.re.clone(), im: c.im.clone() }).collect();
        VectorRepr { terms: Some(terms), text: None }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = VectorRepr::deserialize(d)?;
        match (repr.terms, repr.text) {
            (Some(terms), None) => {
                ExactVector::from_terms(terms.into_iter().map(|t| (t.n, ExactComplex::new(t.re, t.im))))
                    .map_err(D::Error::custom)
            }
            (None, Some(text)) => text.parse().map_err(D::Error::custom),
            _ => Err(D::Error::custom("vector needs exactly one of \"terms\" or \"text\"")),
        }
    }
}

/// A vector argument as it appears in spec files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VectorSpec {
    Exact(ExactVector),
    Grouped(GroupedVector),
}
