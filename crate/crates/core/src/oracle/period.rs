use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{pow_matrix, vec_inf_norm, TruncatedKind, TruncatedOperator};
use crate::spectrum::SpectrumSpec;

/// Null-space threshold on singular values.
pub const NULL_SINGULAR_TOL: f64 = 1e-7;
/// Largest allowed weight of a null vector outside the predicted coordinates.
pub const LEAKAGE_TOL: f64 = 1e-6;

/// Least `m ≤ max_m` with `‖T^m x − x‖∞ < tol`, by direct iteration.
pub fn detect_period(op: &TruncatedOperator, x: &[Complex64], max_m: u64, tol: f64) -> Option<u64> {
    assert!(vec_inf_norm(x) > 0.0, "period of the zero vector is undefined");
    match &op.kind {
        TruncatedKind::Diagonal { entries } => {
            // Only the support moves; track α_j^m on it.
            let support: Vec<(Complex64, Complex64)> =
                entries.iter().zip(x).filter(|(_, c)| c.norm() > 0.0).map(|(&a, &c)| (a, c)).collect();
            let mut powers: Vec<Complex64> = support.iter().map(|&(a, _)| a).collect();
            for m in 1..=max_m {
                let dev = powers.iter().zip(&support).map(|(p, (_, c))| ((p - 1.0) * c).norm()).fold(0.0, f64::max);
                if dev < tol {
                    return Some(m);
                }
                for (p, (a, _)) in powers.iter_mut().zip(&support) {
                    *p *= a;
                }
            }
            None
        }
        _ => {
            let mut y = x.to_vec();
            for m in 1..=max_m {
                y = op.apply(&y);
                let dev = y.iter().zip(x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                if dev < tol {
                    return Some(m);
                }
            }
            None
        }
    }
}

/// Indices `k ≤ d` for which some `m ≤ max_m` brings `α_k^m` within `tol` of 1.
///
/// Computed from the exact rotation numbers: integer residues for rationals,
/// the rotation number scaled by `m` for irrationals. This is what a scan with
/// the given horizon and tolerance can see, which differs from the exact
/// root-of-unity index set once orders exceed `max_m` or `|α_k − 1| < tol`.
pub fn resolvable_indices(spec: &SpectrumSpec, d: usize, max_m: u64, tol: f64) -> BTreeSet<u64> {
    let chord = |t: f64| 2.0 * (PI * t.min(1.0 - t)).sin();
    spec.values()
        .take(d)
        .enumerate()
        .filter(|(_, v)| match v.as_rational() {
            Some(r) => {
                let (p, q) = (r.numer(), r.denom());
                let qf = q.to_f64().expect("finite");
                let mut residue = BigUint::zero();
                (1..=max_m).any(|_| {
                    residue = (&residue + p) % q;
                    chord(residue.to_f64().expect("finite") / qf) < tol
                })
            }
            None => {
                let t = v.rotation_f64();
                (1..=max_m).any(|m| chord((m as f64 * t).fract()) < tol)
            }
        })
        .map(|(i, _)| i as u64 + 1)
        .collect()
}

/// 1-based indices `k` whose `e_k` shows a period within the horizon.
pub fn brute_force_periodic_basis(op: &TruncatedOperator, max_m: u64, tol: f64) -> BTreeSet<u64> {
    (0..op.d)
        .filter(|&k| {
            let mut e = vec![Complex64::new(0.0, 0.0); op.d];
            e[k] = Complex64::new(1.0, 0.0);
            detect_period(op, &e, max_m, tol).is_some()
        })
        .map(|k| k as u64 + 1)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub null_dim: usize,
    pub predicted_dim: usize,
    /// Largest norm of a null vector's part outside the predicted coordinates.
    pub leakage: f64,
    pub agrees: bool,
}

/// Compares the numeric null space of `T^k − I` with `span{e_j : j ∈ predicted}`.
pub fn kernel_compare(op: &TruncatedOperator, k: u64, predicted: &BTreeSet<u64>) -> KernelReport {
    let a = pow_matrix(&op.to_matrix(), k) - DMatrix::identity(op.d, op.d);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut null_dim = 0;
    let mut leakage: f64 = 0.0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s < NULL_SINGULAR_TOL {
            null_dim += 1;
            let outside: f64 =
                (0..op.d).filter(|j| !predicted.contains(&(*j as u64 + 1))).map(|j| v_t[(i, j)].norm_sqr()).sum();
            leakage = leakage.max(outside.sqrt());
        }
    }
    let predicted_dim = predicted.len();
    KernelReport { null_dim, predicted_dim, leakage, agrees: null_dim == predicted_dim && leakage < LEAKAGE_TOL }
}

/// `max_j |(T^k)_{jj} − α_j^k|` for a diagonal truncation.
pub fn spectral_mapping_check(op: &TruncatedOperator, k: u64) -> f64 {
    let TruncatedKind::Diagonal { entries } = &op.kind else {
        panic!("spectral mapping check needs a diagonal truncation");
    };
    if k == 1 {
        return 0.0;
    }
    let power = pow_matrix(&op.to_matrix(), k);
    let k = u32::try_from(k).expect("power fits in u32");
    entries.iter().enumerate().map(|(j, a)| (power[(j, j)] - a.powu(k)).norm()).fold(0.0, f64::max)
}
