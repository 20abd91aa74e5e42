//! Periodic points of diagonal operators `T e_n = α_n e_n`.
//!
//! A vector is periodic exactly when every eigenvalue on its support is a root
//! of unity, and its period is the lcm of those orders. The subspace `P(T)` is
//! described by its classification and by the index set `{n : α_n ∈ G}`; it is
//! never materialized.

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classification::{PeriodicClassification, Rule};
use crate::error::{Error, Result};
use crate::number::Cardinal;
use crate::spectrum::SpectrumSpec;
use crate::unit_scalar::UnitScalar;
use crate::vector::ExactVector;

pub fn classify_diagonal(spec: &SpectrumSpec) -> PeriodicClassification {
    let meta = spec.metadata();
    if meta.g_index_count.is_zero() {
        return PeriodicClassification::zero_only(meta.non_g_index_count, Rule::NoRootOfUnityEigenvalue);
    }
    if meta.all_in_g {
        return match meta.g_value_order_lcm {
            Some(Cardinal::Finite(n)) => PeriodicClassification::whole_space(n, Rule::BoundedEigenvalueOrders),
            _ => PeriodicClassification::proper_dense(Rule::UnboundedEigenvalueOrders),
        };
    }
    match (meta.distinct_g_values_finite, meta.g_value_order_lcm) {
        (true, Some(Cardinal::Finite(k))) => {
            PeriodicClassification::closed_proper(k, meta.non_g_index_count, Rule::FinitelyManyRootValues)
        }
        _ => PeriodicClassification::proper_non_closed(meta.non_g_index_count, Rule::InfinitelyManyRootValues),
    }
}

/// Least `m ≥ 1` with `T^m x = x`.
pub fn period_of_vector(spec: &SpectrumSpec, x: &ExactVector) -> Result<BigUint> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut period = BigUint::from(1u32);
    for n in x.support() {
        let value = spec.value_at(n);
        let order = value
            .order()
            .map_err(|_| Error::NotPeriodic(format!("e_{n} carries the irrational eigenvalue {value}")))?;
        period = num_integer::lcm(period, order);
    }
    Ok(period)
}

pub fn is_periodic(spec: &SpectrumSpec, x: &ExactVector) -> bool {
    x.support().all(|n| spec.value_at(n).is_root_of_unity())
}

pub fn adjoint_spec(spec: &SpectrumSpec) -> SpectrumSpec {
    spec.adjoint()
}

/// Indices `n ≤ d` whose eigenvalue is a root of unity, optionally capped by order.
pub fn root_of_unity_indices(spec: &SpectrumSpec, d: usize, max_order: Option<&BigUint>) -> Vec<u64> {
    spec.values()
        .take(d)
        .enumerate()
        .filter(|(_, v)| match (v.order(), max_order) {
            (Ok(order), Some(cap)) => &order <= cap,
            (Ok(_), None) => true,
            (Err(_), _) => false,
        })
        .map(|(i, _)| i as u64 + 1)
        .collect()
}

/// An eigenvalue that may lie off the unit circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Eigenvalue {
    OnCircle {
        value: UnitScalar,
    },
    /// Any value not known to be a root of unity.
    Other {
        re: f64,
        im: f64,
    },
}

impl Eigenvalue {
    pub fn other(z: Complex64) -> Self {
        Eigenvalue::Other { re: z.re, im: z.im }
    }

    pub fn is_root_of_unity(&self) -> bool {
        matches!(self, Eigenvalue::OnCircle { value } if value.is_root_of_unity())
    }
}

/// The diagonal operators a compactness argument can be applied to.
#[derive(Clone, Debug, PartialEq)]
pub enum DiagonalModel {
    Unit(SpectrumSpec),
    /// Finitely many listed eigenvalues followed by zeros.
    ZeroTail(Vec<Eigenvalue>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactnessNote {
    pub dim_periodic: u64,
    /// Known indices spanning `P(T)`; empty when they lie beyond any listed prefix.
    pub periodic_indices: Vec<u64>,
}

/// For a compact diagonal operator only finitely many eigenvalues are roots of unity,
/// so `P(T)` is finite-dimensional and spanned by those basis vectors.
pub fn compactness_note(model: &DiagonalModel, decay_certificate: bool) -> Result<CompactnessNote> {
    if !decay_certificate {
        return Err(Error::ContractViolation("compactness needs eigenvalues tending to 0".into()));
    }
    match model {
        DiagonalModel::ZeroTail(prefix) => {
            let periodic_indices: Vec<u64> =
                prefix.iter().enumerate().filter(|(_, e)| e.is_root_of_unity()).map(|(i, _)| i as u64 + 1).collect();
            Ok(CompactnessNote { dim_periodic: periodic_indices.len() as u64, periodic_indices })
        }
        DiagonalModel::Unit(spec) => {
            let meta = spec.metadata();
            match meta.g_index_count {
                Cardinal::Finite(n) => {
                    let dim = u64::try_from(n).map_err(|_| Error::ContractViolation("count overflow".into()))?;
                    // Finitely many roots of unity sit in the overrides or the explicit head.
                    let last_override = spec.overrides().keys().next_back().copied().unwrap_or(0);
                    let head = spec.eventual_period().map_or(0, |(h, _)| h).max(last_override);
                    let periodic_indices = root_of_unity_indices(spec, head as usize, None);
                    debug_assert_eq!(periodic_indices.len() as u64, dim);
                    Ok(CompactnessNote { dim_periodic: dim, periodic_indices })
                }
                Cardinal::Infinite => Err(Error::ContractViolation(
                    "infinitely many unit-modulus roots of unity cannot decay to 0".into(),
                )),
            }
        }
    }
}
