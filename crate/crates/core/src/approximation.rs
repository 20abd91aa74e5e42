//! Finite-order approximation of unitary diagonal operators.
//!
//! Every eigenvalue is snapped to the nearest `2^n`-th root of unity. The
//! snapped operator `T_n` satisfies `T_n^{2^n} = I`, and
//! `‖T_n − T‖ = sup_j |β_j − α_j| ≤ 2π/2^n` holds for all indices at once.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{BaseFamily, SpectrumSpec};
use crate::unit_scalar::UnitScalar;

/// Longest explicit prefix a closed-form snap may produce.
const MAX_CLOSED_FORM_PREFIX: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationResult {
    #[serde(rename = "n")]
    pub level: u32,
    /// `2π/2^n`, valid for every index.
    #[serde(rename = "bound")]
    pub error_bound: f64,
    /// Largest possible chord to the nearest `2^n`-th root, `2 sin(π/2^{n+1})`.
    pub tight_bound: f64,
    /// Largest snap distance over indices `1..=probe`.
    #[serde(rename = "observed")]
    pub observed_error: f64,
    #[serde(with = "crate::number::big_uint")]
    pub exponent: BigUint,
    pub probe: u64,
    /// The snapped spec is exact only on `1..=probe`; past it the tail is a placeholder.
    pub probe_limited: bool,
    #[serde(rename = "snapped")]
    pub snapped_spec: SpectrumSpec,
}

pub fn uniform_bound(n: u32) -> f64 {
    2.0 * PI / 2f64.powi(n as i32)
}

pub fn tight_bound(n: u32) -> f64 {
    2.0 * (PI / 2f64.powi(n as i32 + 1)).sin()
}

fn snap(value: &UnitScalar, n: u32) -> UnitScalar {
    value.nearest_dyadic(n).value()
}

/// Keeps only the overrides a snapped base does not already reproduce.
fn snapped_overrides(spec: &SpectrumSpec, n: u32, mut snapped: SpectrumSpec) -> SpectrumSpec {
    for (&j, value) in spec.overrides() {
        let s = snap(value, n);
        if snapped.value_at(j) != s {
            snapped = snapped.with_override(j, s).expect("index ≥ 1");
        }
    }
    snapped
}

/// A snap valid at every index, when the family allows one.
fn closed_form_snap(spec: &SpectrumSpec, n: u32) -> Option<SpectrumSpec> {
    let base = match spec.base() {
        BaseFamily::Constant { .. } => BaseFamily::Constant { value: snap(&spec.base_value(1), n) },
        BaseFamily::ExplicitThenConstant { prefix, .. } => BaseFamily::ExplicitThenConstant {
            prefix: (1..=prefix.len() as u64).map(|j| snap(&spec.base_value(j), n)).collect(),
            tail: snap(&spec.base_value(prefix.len() as u64 + 1), n),
        },
        BaseFamily::Periodic { pattern } => {
            BaseFamily::Periodic { pattern: (1..=pattern.len() as u64).map(|j| snap(&spec.base_value(j), n)).collect() }
        }
        // Past these indices the rotation number is strictly within half a grid step of 0.
        BaseFamily::Dyadic | BaseFamily::Harmonic => {
            let settled = match spec.base() {
                BaseFamily::Dyadic => n as u64 + 2,
                _ => 1u64.checked_shl(n + 1).filter(|&p| p <= MAX_CLOSED_FORM_PREFIX)?,
            };
            BaseFamily::ExplicitThenConstant {
                prefix: (1..=settled).map(|j| snap(&spec.base_value(j), n)).collect(),
                tail: UnitScalar::one(),
            }
        }
        BaseFamily::RootsEnum | BaseFamily::IrrationalDense => return None,
    };
    let snapped = SpectrumSpec::new(base).expect("nonempty pattern stays nonempty");
    Some(snapped_overrides(spec, n, snapped))
}

fn probe_limited_snap(spec: &SpectrumSpec, n: u32, probe: u64) -> SpectrumSpec {
    let prefix = spec.values().take(probe as usize).map(|v| snap(&v, n)).collect();
    SpectrumSpec::explicit_then_constant(prefix, UnitScalar::one())
}

/// Snaps `spec` to the `2^n`-th roots of unity and measures the error on `1..=probe`.
pub fn approximate(spec: &SpectrumSpec, n: u32, probe: u64, allow_probe_limited: bool) -> Result<ApproximationResult> {
    if n == 0 || probe == 0 {
        return Err(Error::InvalidSpectrum("level and probe must be positive".into()));
    }
    let (snapped_spec, probe_limited) = match closed_form_snap(spec, n) {
        Some(s) => (s, false),
        None if allow_probe_limited => (probe_limited_snap(spec, n, probe), true),
        None => {
            return Err(Error::UnsupportedFamily(format!(
                "{:?} has no closed-form snap at level {n}; enable probe-limited snapping",
                spec.base()
            )))
        }
    };
    let observed_error =
        spec.values().take(probe as usize).map(|v| v.nearest_dyadic(n).chord_distance).fold(0.0, f64::max);
    Ok(ApproximationResult {
        level: n,
        error_bound: uniform_bound(n),
        tight_bound: tight_bound(n),
        observed_error,
        exponent: BigUint::one() << n as usize,
        probe,
        probe_limited,
        snapped_spec,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub observed: f64,
    pub bound: f64,
}

pub fn convergence_table(spec: &SpectrumSpec, n_max: u32, probe: u64) -> Vec<ConvergenceRow> {
    let values = spec.prefix_values(probe as usize);
    (1..=n_max)
        .map(|n| ConvergenceRow {
            n,
            observed: values.iter().map(|v| v.nearest_dyadic(n).chord_distance).fold(0.0, f64::max),
            bound: uniform_bound(n),
        })
        .collect()
}
