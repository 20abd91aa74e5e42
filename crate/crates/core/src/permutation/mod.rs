//! Permutation operators `T e_n = e_{σ(n)}` for bijections `σ` of `{1, 2, …}`.
//!
//! Every family knows its orbits in closed form. An orbit is addressed by a
//! [`OrbitLocus`]: the orbit's smallest element, the position of `n` along the
//! orbit counted from that element, and the orbit length (`None` if infinite).

mod grouped;

pub use grouped::{naive_union_member, verify_structured_period, Group, GroupedVector, Selector, Weight};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::classification::{PeriodicClassification, Rule};
use crate::error::{Error, Result};
use crate::number::Cardinal;
use crate::vector::{ExactComplex, ExactVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PermutationRepr", into = "PermutationRepr")]
pub enum PermutationSpec {
    /// Disjoint cycles `(a b c)` meaning `a → b → c → a`; identity elsewhere.
    FiniteCycles {
        cycles: Vec<Vec<u64>>,
    },
    /// `(1)(2 3)(4 5 6 7)…`: each block `[2^{k−1}, 2^k)` rotated by one.
    DoublingBlocks,
    /// Consecutive blocks of length `block_len`, each rotated by one.
    ConstantBlocks {
        block_len: u64,
    },
    /// One infinite orbit: `n ↦ n + 1` on the integers, listed as `0, 1, −1, 2, −2, …`.
    ZigzagShift,
    /// `even` acts on `2, 4, 6, …` and `odd` on `1, 3, 5, …`.
    Interleave {
        even: Box<PermutationSpec>,
        odd: Box<PermutationSpec>,
    },
    Inverse {
        of: Box<PermutationSpec>,
    },
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum PermutationRepr {
    FiniteCycles {
        cycles: Vec<Vec<u64>>,
    },
    DoublingBlocks {},
    ConstantBlocks {
        #[serde(rename = "L")]
        block_len: u64,
    },
    ZigzagShift {},
    Interleave {
        even: Box<PermutationSpec>,
        odd: Box<PermutationSpec>,
    },
    Inverse {
        of: Box<PermutationSpec>,
    },
}

impl TryFrom<PermutationRepr> for PermutationSpec {
    type Error = Error;

    fn try_from(repr: PermutationRepr) -> Result<Self> {
        match repr {
            PermutationRepr::FiniteCycles { cycles } => PermutationSpec::finite_cycles(cycles),
            PermutationRepr::DoublingBlocks {} => Ok(PermutationSpec::DoublingBlocks),
            PermutationRepr::ConstantBlocks { block_len } => PermutationSpec::constant_blocks(block_len),
            PermutationRepr::ZigzagShift {} => Ok(PermutationSpec::ZigzagShift),
            PermutationRepr::Interleave { even, odd } => Ok(PermutationSpec::Interleave { even, odd }),
            PermutationRepr::Inverse { of } => Ok(PermutationSpec::Inverse { of }),
        }
    }
}

impl From<PermutationSpec> for PermutationRepr {
    fn from(spec: PermutationSpec) -> Self {
        match spec {
            PermutationSpec::FiniteCycles { cycles } => PermutationRepr::FiniteCycles { cycles },
            PermutationSpec::DoublingBlocks => PermutationRepr::DoublingBlocks {},
            PermutationSpec::ConstantBlocks { block_len } => PermutationRepr::ConstantBlocks { block_len },
            PermutationSpec::ZigzagShift => PermutationRepr::ZigzagShift {},
            PermutationSpec::Interleave { even, odd } => PermutationRepr::Interleave { even, odd },
            PermutationSpec::Inverse { of } => PermutationRepr::Inverse { of },
        }
    }
}

/// Where `n` sits: `σ^pos(key) = n`, with `key` the smallest element of the orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitLocus {
    pub key: u64,
    pub pos: i64,
    pub len: Option<u64>,
}

/// Orbit-size facts that hold for the whole permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitProfile {
    pub all_finite: bool,
    pub has_finite: bool,
    /// Supremum of the finite orbit sizes; `None` when there are no finite orbits.
    pub sup_finite_size: Option<Cardinal>,
    pub finite_size_lcm: Option<Cardinal>,
}

fn highest_power_of_two(n: u64) -> u64 {
    1u64 << (63 - n.leading_zeros())
}

fn zig(n: u64) -> i64 {
    if n.is_multiple_of(2) {
        (n / 2) as i64
    } else {
        -((n / 2) as i64)
    }
}

fn unzig(z: i64) -> u64 {
    if z > 0 {
        2 * z as u64
    } else {
        1 + 2 * z.unsigned_abs()
    }
}

fn combine_sup(a: &Option<Cardinal>, b: &Option<Cardinal>, lcm: bool) -> Option<Cardinal> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(Cardinal::Finite(x)), Some(Cardinal::Finite(y))) => {
            Some(Cardinal::Finite(if lcm { num_integer::lcm(x.clone(), y.clone()) } else { x.max(y).clone() }))
        }
        _ => Some(Cardinal::Infinite),
    }
}

impl PermutationSpec {
    pub fn finite_cycles(cycles: Vec<Vec<u64>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for cycle in &cycles {
            if cycle.is_empty() {
                return Err(Error::InvalidPermutation("empty cycle".into()));
            }
            for &n in cycle {
                if n == 0 {
                    return Err(Error::InvalidPermutation("indices start at 1".into()));
                }
                if !seen.insert(n) {
                    return Err(Error::InvalidPermutation(format!("{n} appears in two cycles")));
                }
            }
        }
        Ok(PermutationSpec::FiniteCycles { cycles })
    }

    pub fn constant_blocks(block_len: u64) -> Result<Self> {
        if block_len == 0 {
            return Err(Error::InvalidPermutation("block length must be positive".into()));
        }
        Ok(PermutationSpec::ConstantBlocks { block_len })
    }

    pub fn identity() -> Self {
        PermutationSpec::FiniteCycles { cycles: Vec::new() }
    }

    pub fn interleave(even: PermutationSpec, odd: PermutationSpec) -> Self {
        PermutationSpec::Interleave { even: Box::new(even), odd: Box::new(odd) }
    }

    /// `σ^{−1}`; inverting twice returns the original spec.
    pub fn inverse(&self) -> PermutationSpec {
        match self {
            PermutationSpec::Inverse { of } => (**of).clone(),
            other => PermutationSpec::Inverse { of: Box::new(other.clone()) },
        }
    }

    fn find_in_cycles(cycles: &[Vec<u64>], n: u64) -> Option<(&[u64], usize)> {
        cycles.iter().find_map(|c| c.iter().position(|&m| m == n).map(|i| (c.as_slice(), i)))
    }

    /// `σ(n)`.
    pub fn apply(&self, n: u64) -> u64 {
        assert!(n >= 1, "indices start at 1");
        match self {
            PermutationSpec::FiniteCycles { cycles } => match Self::find_in_cycles(cycles, n) {
                Some((c, i)) => c[(i + 1) % c.len()],
                None => n,
            },
            PermutationSpec::DoublingBlocks => {
                let start = highest_power_of_two(n);
                if n == 2 * start - 1 {
                    start
                } else {
                    n + 1
                }
            }
            PermutationSpec::ConstantBlocks { block_len } => {
                let start = (n - 1) / block_len * block_len + 1;
                if n == start + block_len - 1 {
                    start
                } else {
                    n + 1
                }
            }
            PermutationSpec::ZigzagShift => unzig(zig(n) + 1),
            PermutationSpec::Interleave { even, odd } => {
                if n.is_multiple_of(2) {
                    2 * even.apply(n / 2)
                } else {
                    2 * odd.apply(n.div_ceil(2)) - 1
                }
            }
            PermutationSpec::Inverse { of } => of.apply_inverse(n),
        }
    }

    /// `σ^{−1}(n)`.
    pub fn apply_inverse(&self, n: u64) -> u64 {
        assert!(n >= 1, "indices start at 1");
        match self {
            PermutationSpec::FiniteCycles { cycles } => match Self::find_in_cycles(cycles, n) {
                Some((c, i)) => c[(i + c.len() - 1) % c.len()],
                None => n,
            },
            PermutationSpec::DoublingBlocks => {
                let start = highest_power_of_two(n);
                if n == start {
                    2 * start - 1
                } else {
                    n - 1
                }
            }
            PermutationSpec::ConstantBlocks { block_len } => {
                let start = (n - 1) / block_len * block_len + 1;
                if n == start {
                    start + block_len - 1
                } else {
                    n - 1
                }
            }
            PermutationSpec::ZigzagShift => unzig(zig(n) - 1),
            PermutationSpec::Interleave { even, odd } => {
                if n.is_multiple_of(2) {
                    2 * even.apply_inverse(n / 2)
                } else {
                    2 * odd.apply_inverse(n.div_ceil(2)) - 1
                }
            }
            PermutationSpec::Inverse { of } => of.apply(n),
        }
    }

    pub fn locus(&self, n: u64) -> OrbitLocus {
        assert!(n >= 1, "indices start at 1");
        match self {
            PermutationSpec::FiniteCycles { cycles } => match Self::find_in_cycles(cycles, n) {
                Some((c, i)) => {
                    let (i0, &key) = c.iter().enumerate().min_by_key(|(_, &m)| m).expect("nonempty");
                    let len = c.len();
                    OrbitLocus { key, pos: ((i + len - i0) % len) as i64, len: Some(len as u64) }
                }
                None => OrbitLocus { key: n, pos: 0, len: Some(1) },
            },
            PermutationSpec::DoublingBlocks => {
                let start = highest_power_of_two(n);
                OrbitLocus { key: start, pos: (n - start) as i64, len: Some(start) }
            }
            PermutationSpec::ConstantBlocks { block_len } => {
                let start = (n - 1) / block_len * block_len + 1;
                OrbitLocus { key: start, pos: (n - start) as i64, len: Some(*block_len) }
            }
            PermutationSpec::ZigzagShift => OrbitLocus { key: 1, pos: zig(n), len: None },
            PermutationSpec::Interleave { even, odd } => {
                if n.is_multiple_of(2) {
                    let l = even.locus(n / 2);
                    OrbitLocus { key: 2 * l.key, ..l }
                } else {
                    let l = odd.locus(n.div_ceil(2));
                    OrbitLocus { key: 2 * l.key - 1, ..l }
                }
            }
            PermutationSpec::Inverse { of } => {
                let l = of.locus(n);
                OrbitLocus { pos: negate_pos(l.pos, l.len), ..l }
            }
        }
    }

    /// The element at `pos` along the orbit whose smallest element is `key`.
    pub fn element_at(&self, key: u64, pos: i64) -> u64 {
        match self {
            PermutationSpec::FiniteCycles { cycles } => match Self::find_in_cycles(cycles, key) {
                Some((c, i0)) => c[(i0 as i64 + pos).rem_euclid(c.len() as i64) as usize],
                None => key,
            },
            PermutationSpec::DoublingBlocks => key + pos.rem_euclid(key as i64) as u64,
            PermutationSpec::ConstantBlocks { block_len } => key + pos.rem_euclid(*block_len as i64) as u64,
            PermutationSpec::ZigzagShift => unzig(zig(key) + pos),
            PermutationSpec::Interleave { even, odd } => {
                if key.is_multiple_of(2) {
                    2 * even.element_at(key / 2, pos)
                } else {
                    2 * odd.element_at(key.div_ceil(2), pos) - 1
                }
            }
            PermutationSpec::Inverse { of } => {
                let len = of.locus(key).len;
                of.element_at(key, negate_pos(pos, len))
            }
        }
    }

    /// `σ^k(n)` for any integer `k`, in closed form.
    pub fn apply_pow(&self, n: u64, k: i64) -> u64 {
        let l = self.locus(n);
        let pos = match l.len {
            Some(len) => (l.pos + k.rem_euclid(len as i64)).rem_euclid(len as i64),
            None => l.pos + k,
        };
        self.element_at(l.key, pos)
    }

    pub fn orbit_card(&self, m: u64) -> Cardinal {
        match self.locus(m).len {
            Some(len) => Cardinal::finite(len),
            None => Cardinal::Infinite,
        }
    }

    /// Largest element of the orbit of `n`, when the orbit is finite.
    pub fn orbit_max(&self, n: u64) -> Option<u64> {
        match self {
            PermutationSpec::FiniteCycles { cycles } => Some(match Self::find_in_cycles(cycles, n) {
                Some((c, _)) => *c.iter().max().expect("nonempty"),
                None => n,
            }),
            PermutationSpec::DoublingBlocks => Some(2 * highest_power_of_two(n) - 1),
            PermutationSpec::ConstantBlocks { block_len } => Some((n - 1) / block_len * block_len + block_len),
            PermutationSpec::ZigzagShift => None,
            PermutationSpec::Interleave { even, odd } => {
                if n.is_multiple_of(2) {
                    even.orbit_max(n / 2).map(|m| 2 * m)
                } else {
                    odd.orbit_max(n.div_ceil(2)).map(|m| 2 * m - 1)
                }
            }
            PermutationSpec::Inverse { of } => of.orbit_max(n),
        }
    }

    /// Smallest `d ≥ d_request` such that `{1, …, d}` is a union of whole orbits.
    pub fn orbit_closed_prefix(&self, d_request: u64, limit: u64) -> Result<u64> {
        let mut d = d_request.max(1);
        let mut n = 1;
        while n <= d {
            match self.orbit_max(n) {
                Some(m) => d = d.max(m),
                None => return Err(Error::OrbitClosureUnavailable(format!("{n} lies on an infinite orbit"))),
            }
            if d > limit {
                return Err(Error::OrbitClosureUnavailable(format!(
                    "orbit-closed prefix exceeds {limit} at index {n}"
                )));
            }
            n += 1;
        }
        Ok(d)
    }

    pub fn profile(&self) -> OrbitProfile {
        match self {
            PermutationSpec::FiniteCycles { cycles } => {
                let sizes = cycles.iter().map(|c| BigUint::from(c.len())).chain([BigUint::from(1u32)]);
                let sizes: Vec<BigUint> = sizes.collect();
                OrbitProfile {
                    all_finite: true,
                    has_finite: true,
                    sup_finite_size: sizes.iter().max().cloned().map(Cardinal::Finite),
                    finite_size_lcm: Some(Cardinal::Finite(crate::number::lcm_all(&sizes))),
                }
            }
            PermutationSpec::DoublingBlocks => OrbitProfile {
                all_finite: true,
                has_finite: true,
                sup_finite_size: Some(Cardinal::Infinite),
                finite_size_lcm: Some(Cardinal::Infinite),
            },
            PermutationSpec::ConstantBlocks { block_len } => OrbitProfile {
                all_finite: true,
                has_finite: true,
                sup_finite_size: Some(Cardinal::finite(*block_len)),
                finite_size_lcm: Some(Cardinal::finite(*block_len)),
            },
            PermutationSpec::ZigzagShift => {
                OrbitProfile { all_finite: false, has_finite: false, sup_finite_size: None, finite_size_lcm: None }
            }
            PermutationSpec::Interleave { even, odd } => {
                let (a, b) = (even.profile(), odd.profile());
                OrbitProfile {
                    all_finite: a.all_finite && b.all_finite,
                    has_finite: a.has_finite || b.has_finite,
                    sup_finite_size: combine_sup(&a.sup_finite_size, &b.sup_finite_size, false),
                    finite_size_lcm: combine_sup(&a.finite_size_lcm, &b.finite_size_lcm, true),
                }
            }
            PermutationSpec::Inverse { of } => of.profile(),
        }
    }
}

fn negate_pos(pos: i64, len: Option<u64>) -> i64 {
    match len {
        Some(len) => (-pos).rem_euclid(len as i64),
        None => -pos,
    }
}

pub fn classify_permutation(spec: &PermutationSpec) -> PeriodicClassification {
    let profile = spec.profile();
    if !profile.has_finite {
        return PeriodicClassification::zero_only(Cardinal::Infinite, Rule::NoFiniteOrbit);
    }
    let bounded = match profile.finite_size_lcm {
        Some(Cardinal::Finite(m)) => Some(m),
        _ => None,
    };
    match (profile.all_finite, bounded) {
        (true, Some(m)) => PeriodicClassification::whole_space(m, Rule::BoundedFiniteOrbits),
        (true, None) => PeriodicClassification::proper_dense(Rule::UnboundedFiniteOrbits),
        // The infinite orbits span an infinite-dimensional complement of the closure.
        (false, Some(m)) => PeriodicClassification::closed_proper(m, Cardinal::Infinite, Rule::MixedOrbitsBounded),
        (false, None) => PeriodicClassification::proper_non_closed(Cardinal::Infinite, Rule::MixedOrbitsUnbounded),
    }
}

/// Least `m ≥ 1` with `T^m x = x`, i.e. `c_{σ^m(n)} = c_n` for every `n`.
///
/// Orbits are handled separately and the answers combined by lcm. On one
/// orbit the admissible shifts form a subgroup, and its generator must carry
/// the first support position onto another support position with the same
/// coefficient, so only those shifts are tried.
pub fn period_of_vector(spec: &PermutationSpec, x: &ExactVector) -> Result<BigUint> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut orbits: BTreeMap<u64, (u64, BTreeMap<i64, &ExactComplex>)> = BTreeMap::new();
    for (n, c) in x.terms() {
        let l = spec.locus(n);
        let len = l.len.ok_or_else(|| Error::NotPeriodic(format!("e_{n} lies on an infinite orbit")))?;
        orbits.entry(l.key).or_insert_with(|| (len, BTreeMap::new())).1.insert(l.pos, c);
    }
    let mut period = BigUint::from(1u32);
    for (len, coeffs) in orbits.values() {
        let (&p0, c0) = coeffs.iter().next().expect("nonempty orbit group");
        let mut candidates: Vec<u64> = coeffs
            .iter()
            .filter(|(_, c)| *c == c0)
            .map(|(&p, _)| match (p - p0).rem_euclid(*len as i64) as u64 {
                0 => *len,
                s => s,
            })
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let shift = candidates
            .into_iter()
            .find(|&s| coeffs.iter().all(|(&p, c)| coeffs.get(&(p + s as i64).rem_euclid(*len as i64)) == Some(c)))
            .expect("the full orbit length always works");
        period = num_integer::lcm(period, BigUint::from(shift));
    }
    Ok(period)
}

/// `T^k x` computed by moving coefficients.
pub fn apply_to_vector(spec: &PermutationSpec, x: &ExactVector, k: i64) -> ExactVector {
    ExactVector::from_terms(x.terms().map(|(n, c)| (spec.apply_pow(n, k), c.clone())))
        .expect("permutations keep indices positive")
}

/// `√2` if some `n ≤ probe_limit` separates the two permutations, else `0`.
///
/// `‖T_a − T_b‖ ≥ ‖e_{a(n)} − e_{b(n)}‖ = √2` for any such `n`.
pub fn permutation_distance_check(a: &PermutationSpec, b: &PermutationSpec, probe_limit: u64) -> f64 {
    if (1..=probe_limit).any(|n| a.apply(n) != b.apply(n)) {
        std::f64::consts::SQRT_2
    } else {
        0.0
    }
}
