//! Vectors that are constant on each of finitely many index groups.
//!
//! A group is either an explicit finite index set or the structured family
//! "even offsets of the doubling blocks `[2^k, 2^{k+1})`" over a range of `k`,
//! whose weight may vary per block as `2^{−k²}`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::PermutationSpec;
use crate::error::{Error, Result};
use crate::vector::{ExactComplex, ExactVector, VectorSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Selector {
    Explicit {
        indices: BTreeSet<u64>,
    },
    /// `{2^k + 2j : 0 ≤ j < 2^{k−1}}` for `k_from ≤ k ≤ k_to`; no upper end when `k_to` is absent.
    EvenOffsetsOfBlocks {
        k_from: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_to: Option<u32>,
    },
}

/// Largest block exponent whose indices fit in `u64`.
const MAX_BLOCK: u32 = 62;

impl Selector {
    fn contains(&self, n: u64) -> bool {
        match self {
            Selector::Explicit { indices } => indices.contains(&n),
            Selector::EvenOffsetsOfBlocks { k_from, k_to } => {
                let k = 63 - n.leading_zeros();
                n.is_multiple_of(2) && k >= *k_from && k_to.is_none_or(|t| k <= t)
            }
        }
    }

    fn block_range_overlaps(&self, other: &Selector) -> bool {
        match (self, other) {
            (
                Selector::EvenOffsetsOfBlocks { k_from: a, k_to: ta },
                Selector::EvenOffsetsOfBlocks { k_from: b, k_to: tb },
            ) => {
                let end_a = ta.unwrap_or(u32::MAX);
                let end_b = tb.unwrap_or(u32::MAX);
                *a.max(b) <= end_a.min(end_b)
            }
            _ => false,
        }
    }

    fn is_finite(&self) -> bool {
        !matches!(self, Selector::EvenOffsetsOfBlocks { k_to: None, .. })
    }
}

/// Indices of block `k` in the structured selector.
pub fn even_offsets_of_block(k: u32) -> impl Iterator<Item = u64> {
    assert!((1..=MAX_BLOCK).contains(&k));
    let start = 1u64 << k;
    (0..1u64 << (k - 1)).map(move |j| start + 2 * j)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Weight {
    Exact {
        #[serde(with = "crate::number::rational")]
        re: num_rational::BigRational,
        #[serde(default = "num_rational::BigRational::zero", with = "crate::number::rational")]
        im: num_rational::BigRational,
    },
    /// `2^{−k²}` on block `k`.
    InverseSquareExponent,
}

impl Weight {
    pub fn exact(c: ExactComplex) -> Self {
        Weight::Exact { re: c.re, im: c.im }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Weight::Exact { re, im } if re.is_zero() && im.is_zero())
    }

    fn on_block(&self, k: u32) -> Complex64 {
        match self {
            Weight::Exact { re, im } => ExactComplex::new(re.clone(), im.clone()).to_complex64(),
            Weight::InverseSquareExponent => Complex64::new((-(k as f64) * k as f64).exp2(), 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Group {
    pub selector: Selector,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupedRepr", into = "GroupedRepr")]
pub struct GroupedVector {
    groups: Vec<Group>,
    square_summable: bool,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupedRepr {
    groups: Vec<Group>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    square_summable: Option<bool>,
}

impl TryFrom<GroupedRepr> for GroupedVector {
    type Error = Error;

    fn try_from(repr: GroupedRepr) -> Result<Self> {
        let v = GroupedVector::new(repr.groups)?;
        if repr.square_summable.is_some_and(|claimed| claimed != v.square_summable) {
            return Err(Error::InvalidVector("square_summable flag disagrees with the groups".into()));
        }
        Ok(v)
    }
}

impl From<GroupedVector> for GroupedRepr {
    fn from(v: GroupedVector) -> Self {
        GroupedRepr { square_summable: Some(v.square_summable), groups: v.groups }
    }
}

impl GroupedVector {
    pub fn new(groups: Vec<Group>) -> Result<Self> {
        for g in &groups {
            match (&g.selector, &g.weight) {
                (Selector::Explicit { indices }, w) => {
                    if indices.contains(&0) {
                        return Err(Error::InvalidVector("indices start at 1".into()));
                    }
                    if matches!(w, Weight::InverseSquareExponent) {
                        return Err(Error::InvalidVector("per-block weights need a block selector".into()));
                    }
                }
                (Selector::EvenOffsetsOfBlocks { k_from, k_to }, _) => {
                    let end = k_to.unwrap_or(MAX_BLOCK);
                    if *k_from < 1 || end > MAX_BLOCK || *k_from > end {
                        return Err(Error::InvalidVector(format!(
                            "block range must satisfy 1 <= k_from <= k_to <= {MAX_BLOCK}"
                        )));
                    }
                }
            }
        }
        for (i, a) in groups.iter().enumerate() {
            for b in &groups[i + 1..] {
                let clash = match (&a.selector, &b.selector) {
                    (Selector::Explicit { indices }, other) | (other, Selector::Explicit { indices }) => {
                        indices.iter().any(|&n| other.contains(n))
                    }
                    _ => a.selector.block_range_overlaps(&b.selector),
                };
                if clash {
                    return Err(Error::InvalidVector("groups must be disjoint".into()));
                }
            }
        }
        // Infinitely many indices with one constant nonzero weight are not square-summable;
        // Σ_k 2^{k−1}·2^{−2k²} converges.
        let square_summable = groups
            .iter()
            .all(|g| g.selector.is_finite() || g.weight.is_zero() || g.weight == Weight::InverseSquareExponent);
        Ok(GroupedVector { groups, square_summable })
    }

    pub fn empty() -> Self {
        GroupedVector { groups: Vec::new(), square_summable: true }
    }

    /// `Σ_{k ≥ 1} 2^{−k²} Σ_{0 ≤ j < 2^{k−1}} e_{2^k + 2j}`.
    pub fn doubling_witness() -> Self {
        GroupedVector::new(vec![Group {
            selector: Selector::EvenOffsetsOfBlocks { k_from: 1, k_to: None },
            weight: Weight::InverseSquareExponent,
        }])
        .expect("valid")
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn square_summable(&self) -> bool {
        self.square_summable
    }

    /// Float coordinates `1..=d`.
    pub fn to_dense(&self, d: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); d];
        for g in &self.groups {
            match &g.selector {
                Selector::Explicit { indices } => {
                    for &n in indices.iter().filter(|&&n| n as usize <= d) {
                        out[n as usize - 1] = g.weight.on_block(0);
                    }
                }
                Selector::EvenOffsetsOfBlocks { k_from, k_to } => {
                    let last = k_to.unwrap_or(MAX_BLOCK);
                    for k in (*k_from..=last).take_while(|&k| (1u64 << k) as usize <= d) {
                        for n in even_offsets_of_block(k).take_while(|&n| n as usize <= d) {
                            out[n as usize - 1] = g.weight.on_block(k);
                        }
                    }
                }
            }
        }
        out
    }

    /// The same vector when every group is an explicit finite set.
    pub fn as_exact(&self) -> Option<ExactVector> {
        let mut terms = Vec::new();
        for g in &self.groups {
            let (Selector::Explicit { indices }, Weight::Exact { re, im }) = (&g.selector, &g.weight) else {
                return None;
            };
            terms.extend(indices.iter().map(|&n| (n, ExactComplex::new(re.clone(), im.clone()))));
        }
        ExactVector::from_terms(terms).ok()
    }
}

fn is_doubling(spec: &PermutationSpec) -> bool {
    match spec {
        PermutationSpec::DoublingBlocks => true,
        PermutationSpec::Inverse { of } => is_doubling(of),
        _ => false,
    }
}

/// Whether `T^M x = x`, by checking that `σ^M` maps every group onto itself.
pub fn verify_structured_period(spec: &PermutationSpec, x: &GroupedVector, m: u64) -> Result<bool> {
    if !x.square_summable {
        return Err(Error::NotSquareSummable);
    }
    let shift = i64::try_from(m).map_err(|_| Error::InvalidVector(format!("power {m} too large")))?;
    for g in x.groups.iter().filter(|g| !g.weight.is_zero()) {
        match &g.selector {
            Selector::Explicit { indices } => {
                for &n in indices {
                    if spec.locus(n).len.is_none() {
                        // A finite set cannot be invariant under a shift along an infinite orbit.
                        return Ok(false);
                    }
                    if !indices.contains(&spec.apply_pow(n, shift)) {
                        return Ok(false);
                    }
                }
            }
            Selector::EvenOffsetsOfBlocks { .. } => {
                if !is_doubling(spec) {
                    return Err(Error::UnsupportedSelector(
                        "even block offsets are only closed-form for the doubling blocks".into(),
                    ));
                }
                // σ^M rotates each block of even size 2^k by M, preserving offset parity iff M is even.
                if !m.is_multiple_of(2) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether `x` lies in the union over `k` of the spans of basis vectors with orbit size at most `k`.
pub fn naive_union_member(spec: &PermutationSpec, x: &VectorSpec) -> Result<bool> {
    match x {
        VectorSpec::Exact(v) => Ok(v.support().all(|n| spec.locus(n).len.is_some())),
        VectorSpec::Grouped(g) => grouped_union_member(spec, g),
    }
}

fn grouped_union_member(spec: &PermutationSpec, x: &GroupedVector) -> Result<bool> {
    let profile = spec.profile();
    let bounded_everywhere =
        profile.all_finite && matches!(profile.sup_finite_size, Some(crate::number::Cardinal::Finite(_)));
    for g in x.groups.iter().filter(|g| !g.weight.is_zero()) {
        match &g.selector {
            Selector::Explicit { indices } => {
                if indices.iter().any(|&n| spec.locus(n).len.is_none()) {
                    return Ok(false);
                }
            }
            Selector::EvenOffsetsOfBlocks { k_to, .. } => {
                if bounded_everywhere {
                    continue;
                }
                if !profile.has_finite {
                    return Ok(false);
                }
                if is_doubling(spec) {
                    // Block k sits inside the orbit [2^k, 2^{k+1}) of size 2^k.
                    if k_to.is_none() {
                        return Ok(false);
                    }
                    continue;
                }
                return Err(Error::UnsupportedSelector(
                    "orbit sizes along even block offsets are not known in closed form here".into(),
                ));
            }
        }
    }
    Ok(true)
}
