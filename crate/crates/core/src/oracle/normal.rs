use std::f64::consts::TAU;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{inf_norm, pow_matrix, TruncatedOperator};
use crate::error::{Error, Result};

const SCHUR_MAX_ITER: usize = 10_000;

/// An eigenvalue and the closest root of unity `e^{2πi p/q}` with `q ≤ max_order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenSnap {
    pub re: f64,
    pub im: f64,
    pub p: u64,
    pub q: u64,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalExponentReport {
    /// Least `N` with `‖T^N − I‖∞ < tol`, if one was found.
    pub exponent: Option<u64>,
    pub unitary_defect: f64,
    pub eigenvalues: Vec<EigenSnap>,
}

/// Ties go to the smaller order, so `p/q` comes out reduced.
pub fn nearest_root_of_unity(z: Complex64, max_order: u64) -> EigenSnap {
    let t = (z.arg() / TAU).rem_euclid(1.0);
    let mut best = EigenSnap { re: z.re, im: z.im, p: 0, q: 1, distance: (z - 1.0).norm() };
    for q in 2..=max_order {
        let p = ((t * q as f64).round() as u64) % q;
        let distance = (Complex64::from_polar(1.0, TAU * p as f64 / q as f64) - z).norm();
        if distance < best.distance {
            best = EigenSnap { p, q, distance, ..best };
        }
    }
    best
}

fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.as_slice().to_vec())
        .ok_or_else(|| Error::WrongOperatorKind("Schur iteration did not converge".into()))
}

/// Finds the exponent of a numerically normal matrix.
///
/// For normal `T`, `|λ^N − 1| ≤ ‖T^N − I‖∞`, so the eigenvalues rule out
/// most `N` cheaply; survivors are confirmed on the matrix power itself.
pub fn normal_matrix_exponent(op: &TruncatedOperator, max_n: u64, tol: f64) -> Result<NormalExponentReport> {
    let m = op.to_matrix();
    super::dense_normal(m.clone())?;
    let eig = eigenvalues(&m)?;
    let identity = DMatrix::identity(op.d, op.d);
    let mut powers = eig.clone();
    let mut exponent = None;
    for n in 1..=max_n {
        let dev = powers.iter().map(|p| (p - 1.0).norm()).fold(0.0, f64::max);
        if dev < 2.0 * tol && inf_norm(&(pow_matrix(&m, n) - &identity)) < tol {
            exponent = Some(n);
            break;
        }
        for (p, l) in powers.iter_mut().zip(&eig) {
            *p *= l;
        }
    }
    Ok(NormalExponentReport {
        exponent,
        unitary_defect: op.unitary_defect(),
        eigenvalues: eig.into_iter().map(|z| nearest_root_of_unity(z, max_n)).collect(),
    })
}
