//! Eigenvalue sequences `α_1, α_2, …` for diagonal operators.
//!
//! Every family knows its own closed form, so the metadata below describes the
//! whole infinite sequence rather than a sampled prefix.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::{lcm_all, Cardinal};
use crate::unit_scalar::UnitScalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "FamilyRepr", into = "FamilyRepr")]
pub enum BaseFamily {
    Constant {
        value: UnitScalar,
    },
    ExplicitThenConstant {
        prefix: Vec<UnitScalar>,
        tail: UnitScalar,
    },
    /// `α_n = pattern[(n − 1) mod len]`.
    Periodic {
        pattern: Vec<UnitScalar>,
    },
    /// `α_n = e^{2πi/n}`.
    Harmonic,
    /// `α_n = e^{2πi/2^{n−1}}`, so `α_1 = 1`.
    Dyadic,
    /// Every root of unity once, ordered by order then numerator.
    RootsEnum,
    /// `α_n = e^{2πi(q_n + √2)}` with `q_n` running over the same fractions as [`BaseFamily::RootsEnum`].
    IrrationalDense,
}

// Field-less families are empty structs here so that stray fields are rejected.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum FamilyRepr {
    Constant { value: UnitScalar },
    ExplicitThenConstant { prefix: Vec<UnitScalar>, tail: UnitScalar },
    Periodic { pattern: Vec<UnitScalar> },
    Harmonic {},
    Dyadic {},
    RootsEnum {},
    IrrationalDense {},
}

impl From<FamilyRepr> for BaseFamily {
    fn from(repr: FamilyRepr) -> Self {
        match repr {
            FamilyRepr::Constant { value } => BaseFamily::Constant { value },
            FamilyRepr::ExplicitThenConstant { prefix, tail } => BaseFamily::ExplicitThenConstant { prefix, tail },
            FamilyRepr::Periodic { pattern } => BaseFamily::Periodic { pattern },
            FamilyRepr::Harmonic {} => BaseFamily::Harmonic,
            FamilyRepr::Dyadic {} => BaseFamily::Dyadic,
            FamilyRepr::RootsEnum {} => BaseFamily::RootsEnum,
            FamilyRepr::IrrationalDense {} => BaseFamily::IrrationalDense,
        }
    }
}

impl From<BaseFamily> for FamilyRepr {
    fn from(family: BaseFamily) -> Self {
        match family {
            BaseFamily::Constant { value } => FamilyRepr::Constant { value },
            BaseFamily::ExplicitThenConstant { prefix, tail } => FamilyRepr::ExplicitThenConstant { prefix, tail },
            BaseFamily::Periodic { pattern } => FamilyRepr::Periodic { pattern },
            BaseFamily::Harmonic => FamilyRepr::Harmonic {},
            BaseFamily::Dyadic => FamilyRepr::Dyadic {},
            BaseFamily::RootsEnum => FamilyRepr::RootsEnum {},
            BaseFamily::IrrationalDense => FamilyRepr::IrrationalDense {},
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Override {
    pub n: u64,
    pub value: UnitScalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSpec {
    base: BaseFamily,
    overrides: BTreeMap<u64, UnitScalar>,
    /// Conjugates every base value; overrides are stored as given.
    conjugate: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRepr {
    base: BaseFamily,
    #[serde(default)]
    overrides: Vec<Override>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    conjugate: bool,
}

impl Serialize for SpectrumSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecRepr {
            base: self.base.clone(),
            overrides: self.overrides.iter().map(|(&n, value)| Override { n, value: value.clone() }).collect(),
            conjugate: self.conjugate,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectrumSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SpecRepr::deserialize(d)?;
        let mut spec = SpectrumSpec::new(repr.base).map_err(serde::de::Error::custom)?;
        spec.conjugate = repr.conjugate;
        for o in repr.overrides {
            if spec.overrides.contains_key(&o.n) {
                return Err(serde::de::Error::custom(format!("index {} overridden twice", o.n)));
            }
            spec = spec.with_override(o.n, o.value).map_err(serde::de::Error::custom)?;
        }
        Ok(spec)
    }
}

/// What the closure of `{α_n}` is claimed to be.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClaimedClosure {
    /// Finitely many distinct values; the closure is the value set itself.
    FiniteSet {
        values: Vec<UnitScalar>,
    },
    /// The values together with their single accumulation point `1`.
    ValuesPlusOne,
    FullCircle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumMetadata {
    pub all_in_g: bool,
    pub distinct_g_values_finite: bool,
    /// Largest order among roots of unity in the sequence; `None` when there are none.
    pub sup_order: Option<Cardinal>,
    /// lcm of the orders of the distinct roots of unity; `None` when there are none.
    pub g_value_order_lcm: Option<Cardinal>,
    pub non_g_index_count: Cardinal,
    pub g_index_count: Cardinal,
    pub claimed_spectrum_closure: ClaimedClosure,
}

impl SpectrumSpec {
    pub fn new(base: BaseFamily) -> Result<Self> {
        match &base {
            BaseFamily::Periodic { pattern } if pattern.is_empty() => {
                return Err(Error::InvalidSpectrum("periodic pattern must be nonempty".into()))
            }
            _ => {}
        }
        Ok(SpectrumSpec { base, overrides: BTreeMap::new(), conjugate: false })
    }

    pub fn constant(value: UnitScalar) -> Self {
        SpectrumSpec::new(BaseFamily::Constant { value }).expect("valid")
    }

    pub fn periodic(pattern: Vec<UnitScalar>) -> Result<Self> {
        SpectrumSpec::new(BaseFamily::Periodic { pattern })
    }

    pub fn explicit_then_constant(prefix: Vec<UnitScalar>, tail: UnitScalar) -> Self {
        SpectrumSpec::new(BaseFamily::ExplicitThenConstant { prefix, tail }).expect("valid")
    }

    pub fn harmonic() -> Self {
        SpectrumSpec::new(BaseFamily::Harmonic).expect("valid")
    }

    pub fn dyadic() -> Self {
        SpectrumSpec::new(BaseFamily::Dyadic).expect("valid")
    }

    pub fn roots_enum() -> Self {
        SpectrumSpec::new(BaseFamily::RootsEnum).expect("valid")
    }

    pub fn irrational_dense() -> Self {
        SpectrumSpec::new(BaseFamily::IrrationalDense).expect("valid")
    }

    /// `α_n = e^{2πi (n mod k)/k}`.
    pub fn residue(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSpectrum("residue modulus must be positive".into()));
        }
        let pattern = (1..=k).map(|n| UnitScalar::rational(n % k, k).expect("k > 0")).collect();
        SpectrumSpec::periodic(pattern)
    }

    pub fn with_override(mut self, n: u64, value: UnitScalar) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpectrum("override indices start at 1".into()));
        }
        self.overrides.insert(n, value);
        Ok(self)
    }

    pub fn base(&self) -> &BaseFamily {
        &self.base
    }

    pub fn overrides(&self) -> &BTreeMap<u64, UnitScalar> {
        &self.overrides
    }

    pub fn is_conjugated(&self) -> bool {
        self.conjugate
    }

    /// The generator of `T*`: every value conjugated.
    pub fn adjoint(&self) -> SpectrumSpec {
        let conj_all = |v: &[UnitScalar]| v.iter().map(UnitScalar::conj).collect::<Vec<_>>();
        let (base, conjugate) = match &self.base {
            BaseFamily::Constant { value } => (BaseFamily::Constant { value: value.conj() }, false),
            BaseFamily::ExplicitThenConstant { prefix, tail } => {
                (BaseFamily::ExplicitThenConstant { prefix: conj_all(prefix), tail: tail.conj() }, false)
            }
            BaseFamily::Periodic { pattern } => (BaseFamily::Periodic { pattern: conj_all(pattern) }, false),
            other => (other.clone(), !self.conjugate),
        };
        SpectrumSpec { base, overrides: self.overrides.iter().map(|(&n, v)| (n, v.conj())).collect(), conjugate }
    }

    /// `α_n` before overrides.
    pub(crate) fn base_value(&self, n: u64) -> UnitScalar {
        let v = match &self.base {
            BaseFamily::Constant { value } => value.clone(),
            BaseFamily::ExplicitThenConstant { prefix, tail } => prefix.get((n - 1) as usize).unwrap_or(tail).clone(),
            BaseFamily::Periodic { pattern } => pattern[((n - 1) % pattern.len() as u64) as usize].clone(),
            BaseFamily::Harmonic => UnitScalar::rational(1, n).expect("n ≥ 1"),
            BaseFamily::Dyadic => {
                let q = BigUint::one() << (n - 1) as usize;
                UnitScalar::rational(1, q).expect("positive")
            }
            BaseFamily::RootsEnum => {
                let (p, q) = nth_reduced_fraction(n);
                UnitScalar::rational(p, q).expect("positive")
            }
            BaseFamily::IrrationalDense => {
                let (p, q) = nth_reduced_fraction(n);
                UnitScalar::sqrt2_offset(BigRational::new(p.into(), q.into()))
            }
        };
        if self.conjugate {
            v.conj()
        } else {
            v
        }
    }

    /// `α_n` for `n ≥ 1`.
    pub fn value_at(&self, n: u64) -> UnitScalar {
        assert!(n >= 1, "spectrum indices start at 1");
        match self.overrides.get(&n) {
            Some(v) => v.clone(),
            None => self.base_value(n),
        }
    }

    /// `α_1, α_2, …` without recomputing the enumeration per index.
    pub fn values(&self) -> impl Iterator<Item = UnitScalar> + '_ {
        let mut fractions = ReducedFractions::default();
        (1u64..).map(move |n| {
            let base = match &self.base {
                BaseFamily::RootsEnum | BaseFamily::IrrationalDense => {
                    let (p, q) = fractions.next().expect("infinite");
                    let v = if matches!(self.base, BaseFamily::RootsEnum) {
                        UnitScalar::rational(p, q).expect("positive")
                    } else {
                        UnitScalar::sqrt2_offset(BigRational::new(p.into(), q.into()))
                    };
                    Some(if self.conjugate { v.conj() } else { v })
                }
                _ => None,
            };
            match self.overrides.get(&n) {
                Some(v) => v.clone(),
                None => base.unwrap_or_else(|| self.base_value(n)),
            }
        })
    }

    pub fn prefix_values(&self, d: usize) -> Vec<UnitScalar> {
        self.values().take(d).collect()
    }

    /// For eventually periodic families: `(h, p)` such that `α_{n+p} = α_n` for all `n > h`.
    pub fn eventual_period(&self) -> Option<(u64, u64)> {
        let (prefix, period) = match &self.base {
            BaseFamily::Constant { .. } => (0, 1),
            BaseFamily::ExplicitThenConstant { prefix, .. } => (prefix.len() as u64, 1),
            BaseFamily::Periodic { pattern } => (0, pattern.len() as u64),
            _ => return None,
        };
        let last_override = self.overrides.keys().next_back().copied().unwrap_or(0);
        Some((prefix.max(last_override), period))
    }

    pub fn metadata(&self) -> SpectrumMetadata {
        match self.eventual_period() {
            Some((head, period)) => self.eventually_periodic_metadata(head, period),
            None => self.infinite_family_metadata(),
        }
    }

    fn eventually_periodic_metadata(&self, head: u64, period: u64) -> SpectrumMetadata {
        let mut g_head = 0u64;
        let mut non_g_head = 0u64;
        let mut g_tail = false;
        let mut non_g_tail = false;
        let mut distinct: Vec<UnitScalar> = Vec::new();
        for (i, v) in self.values().take((head + period) as usize).enumerate() {
            let in_tail = i as u64 >= head;
            match (v.is_root_of_unity(), in_tail) {
                (true, false) => g_head += 1,
                (false, false) => non_g_head += 1,
                (true, true) => g_tail = true,
                (false, true) => non_g_tail = true,
            }
            if !distinct.contains(&v) {
                distinct.push(v);
            }
        }
        let orders: Vec<BigUint> = distinct.iter().filter_map(|v| v.order().ok()).collect();
        sort_on_circle(&mut distinct);
        let count = |head: u64, tail: bool| {
            if tail {
                Cardinal::Infinite
            } else {
                Cardinal::finite(head)
            }
        };
        SpectrumMetadata {
            all_in_g: non_g_head == 0 && !non_g_tail,
            distinct_g_values_finite: true,
            sup_order: orders.iter().max().cloned().map(Cardinal::Finite),
            g_value_order_lcm: (!orders.is_empty()).then(|| Cardinal::Finite(lcm_all(&orders))),
            non_g_index_count: count(non_g_head, non_g_tail),
            g_index_count: count(g_head, g_tail),
            claimed_spectrum_closure: ClaimedClosure::FiniteSet { values: distinct },
        }
    }

    fn infinite_family_metadata(&self) -> SpectrumMetadata {
        let closure = match self.base {
            BaseFamily::Harmonic | BaseFamily::Dyadic => ClaimedClosure::ValuesPlusOne,
            _ => ClaimedClosure::FullCircle,
        };
        let rational_overrides: Vec<BigUint> = self.overrides.values().filter_map(|v| v.order().ok()).collect();
        let irrational_overrides = (self.overrides.len() - rational_overrides.len()) as u64;
        if matches!(self.base, BaseFamily::IrrationalDense) {
            let mut distinct = rational_overrides.clone();
            distinct.sort();
            distinct.dedup();
            SpectrumMetadata {
                all_in_g: false,
                distinct_g_values_finite: true,
                sup_order: distinct.last().cloned().map(Cardinal::Finite),
                g_value_order_lcm: (!distinct.is_empty()).then(|| Cardinal::Finite(lcm_all(&distinct))),
                non_g_index_count: Cardinal::Infinite,
                g_index_count: Cardinal::finite(rational_overrides.len() as u64),
                claimed_spectrum_closure: closure,
            }
        } else {
            // Infinitely many indices keep their base value, and base orders are unbounded.
            SpectrumMetadata {
                all_in_g: irrational_overrides == 0,
                distinct_g_values_finite: false,
                sup_order: Some(Cardinal::Infinite),
                g_value_order_lcm: Some(Cardinal::Infinite),
                non_g_index_count: Cardinal::finite(irrational_overrides),
                g_index_count: Cardinal::Infinite,
                claimed_spectrum_closure: closure,
            }
        }
    }
}

fn sort_on_circle(values: &mut [UnitScalar]) {
    values.sort_by(|a, b| a.rotation_f64().total_cmp(&b.rotation_f64()).then_with(|| a.formula().cmp(&b.formula())));
}

/// Reduced fractions `p/q ∈ [0, 1)` ordered by `q`, then `p`: `0/1, 1/2, 1/3, 2/3, 1/4, …`.
#[derive(Clone, Debug, Default)]
pub struct ReducedFractions {
    p: u64,
    q: u64,
}

impl Iterator for ReducedFractions {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        if self.q == 0 {
            self.q = 1;
            self.p = 0;
            return Some((0, 1));
        }
        loop {
            self.p += 1;
            if self.p >= self.q {
                self.q += 1;
                self.p = 1;
            }
            if self.p.gcd(&self.q) == 1 {
                return Some((self.p, self.q));
            }
        }
    }
}

fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            while n.is_multiple_of(f) {
                n /= f;
            }
            result -= result / f;
        }
        f += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `n`-th term (1-based) of [`ReducedFractions`].
pub fn nth_reduced_fraction(n: u64) -> (u64, u64) {
    assert!(n >= 1);
    if n == 1 {
        return (0, 1);
    }
    let mut remaining = n - 1;
    let mut q = 2u64;
    loop {
        // φ(q) fractions have denominator q.
        let count = totient(q);
        if remaining <= count {
            let p = (1..q).filter(|p| p.gcd(&q) == 1).nth((remaining - 1) as usize).expect("counted");
            return (p, q);
        }
        remaining -= count;
        q += 1;
    }
}

impl SpectrumMetadata {
    /// Basic consistency between the fields.
    pub fn is_coherent(&self) -> bool {
        let g_none = self.g_index_count.is_zero();
        (!self.all_in_g || self.non_g_index_count.is_zero())
            && (!matches!(self.sup_order, Some(Cardinal::Finite(_))) || self.distinct_g_values_finite)
            && (g_none == self.sup_order.is_none())
            && !(self.g_index_count.is_zero() && self.non_g_index_count.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn r(p: i64, q: i64) -> UnitScalar {
        UnitScalar::rational(p, q).unwrap()
    }

    fn two_root2() -> UnitScalar {
        UnitScalar::sqrt2_multiple(BigRational::zero(), 2).unwrap()
    }

    fn codim1() -> SpectrumSpec {
        SpectrumSpec::dyadic().with_override(1, two_root2()).unwrap()
    }

    #[test]
    fn value_examples() {
        assert_eq!(SpectrumSpec::harmonic().value_at(6), r(1, 6));
        assert_eq!(codim1().value_at(1), two_root2());
        let alt = SpectrumSpec::periodic(vec![r(0, 1), r(1, 2)]).unwrap();
        assert_eq!(alt.value_at(5), r(0, 1));
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(SpectrumSpec::harmonic().prefix_values(3), vec![r(0, 1), r(1, 2), r(1, 3)]);
        assert_eq!(SpectrumSpec::constant(r(1, 2)).prefix_values(2), vec![r(1, 2), r(1, 2)]);
        assert_eq!(SpectrumSpec::dyadic().prefix_values(4), vec![r(0, 1), r(1, 2), r(1, 4), r(1, 8)]);
    }

    #[test]
    fn enumeration_order() {
        let got: Vec<_> = ReducedFractions::default().take(8).collect();
        assert_eq!(got, vec![(0, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (2, 5)]);
        for (i, f) in ReducedFractions::default().take(3000).enumerate() {
            assert_eq!(nth_reduced_fraction(i as u64 + 1), f);
        }
    }

    #[test]
    fn metadata_examples() {
        let m = SpectrumSpec::roots_enum().metadata();
        assert_eq!(m.claimed_spectrum_closure, ClaimedClosure::FullCircle);
        assert!(m.all_in_g);
        assert_eq!(m.sup_order, Some(Cardinal::Infinite));

        let m = SpectrumSpec::irrational_dense().metadata();
        assert_eq!(m.g_index_count, Cardinal::zero());
        assert!(!m.all_in_g);
        assert_eq!(m.claimed_spectrum_closure, ClaimedClosure::FullCircle);

        let m = SpectrumSpec::residue(4).unwrap().metadata();
        assert_eq!(m.sup_order, Some(Cardinal::finite(4u32)));
        assert!(m.all_in_g);

        let m = SpectrumSpec::harmonic().metadata();
        assert!(m.all_in_g && !m.distinct_g_values_finite);
        assert_eq!(m.claimed_spectrum_closure, ClaimedClosure::ValuesPlusOne);
    }

    #[test]
    fn overrides_adjust_counts() {
        let m = codim1().metadata();
        assert!(!m.all_in_g);
        assert_eq!(m.non_g_index_count, Cardinal::finite(1u32));
        assert_eq!(m.g_index_count, Cardinal::Infinite);

        let spec =
            SpectrumSpec::irrational_dense().with_override(3, r(1, 6)).unwrap().with_override(9, r(1, 4)).unwrap();
        let m = spec.metadata();
        assert_eq!(m.g_index_count, Cardinal::finite(2u32));
        assert_eq!(m.sup_order, Some(Cardinal::finite(6u32)));
        assert_eq!(m.g_value_order_lcm, Some(Cardinal::finite(12u32)));

        // An override past the explicit prefix extends the head window.
        let spec = SpectrumSpec::constant(r(1, 3)).with_override(7, two_root2()).unwrap();
        let m = spec.metadata();
        assert_eq!(m.non_g_index_count, Cardinal::finite(1u32));
        assert_eq!(m.g_index_count, Cardinal::Infinite);
        assert_eq!(m.sup_order, Some(Cardinal::finite(3u32)));
    }

    #[test]
    fn explicit_prefix_metadata() {
        let spec = SpectrumSpec::explicit_then_constant(vec![two_root2(), r(1, 5)], r(0, 1));
        let m = spec.metadata();
        assert_eq!(m.non_g_index_count, Cardinal::finite(1u32));
        assert_eq!(m.g_value_order_lcm, Some(Cardinal::finite(5u32)));
        match m.claimed_spectrum_closure {
            ClaimedClosure::FiniteSet { values } => assert_eq!(values.len(), 3),
            other => panic!("unexpected closure {other:?}"),
        }
    }

    #[test]
    fn adjoint_conjugates() {
        assert_eq!(SpectrumSpec::constant(r(1, 3)).adjoint(), SpectrumSpec::constant(r(2, 3)));
        assert_eq!(SpectrumSpec::constant(r(0, 1)).adjoint(), SpectrumSpec::constant(r(0, 1)));
        let h = SpectrumSpec::harmonic().adjoint();
        assert_eq!(h.value_at(5), r(4, 5));
        assert_eq!(h.adjoint(), SpectrumSpec::harmonic());
    }

    #[test]
    fn json_shape() {
        let text = serde_json::to_string(&codim1()).unwrap();
        assert!(text.starts_with(r#"{"base":{"family":"dyadic"},"overrides":[{"n":1,"value":{"kind":"irrational""#));
        let back: SpectrumSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, codim1());
        let bad = r#"{"base":{"family":"periodic","pattern":[]}}"#;
        assert!(serde_json::from_str::<SpectrumSpec>(bad).is_err());
        let bad = r#"{"base":{"family":"harmonic"},"overrides":[{"n":0,"value":{"kind":"rational","p":0,"q":1}}]}"#;
        assert!(serde_json::from_str::<SpectrumSpec>(bad).is_err());
        let bad = r#"{"base":{"family":"harmonic","q":2}}"#;
        assert!(serde_json::from_str::<SpectrumSpec>(bad).is_err());
        let bad = r#"{"base":{"family":"hyperbolic"}}"#;
        assert!(serde_json::from_str::<SpectrumSpec>(bad).is_err());
    }
}
