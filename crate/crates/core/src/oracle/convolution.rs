use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::nearest_root_of_unity;
use crate::diagonal::{compactness_note, DiagonalModel, Eigenvalue};
use crate::unit_scalar::UnitScalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionReport {
    /// `(n, λ_n)` for each requested frequency.
    pub eigenvalues: Vec<(i64, Complex64)>,
    /// Frequencies whose `λ_n` is within `tol` of a root of unity of order at most `max_order`.
    pub periodic: Vec<i64>,
    pub dim_periodic: u64,
}

/// Eigenvalues `λ_n = (2π)^{-1/2} ∫ h(x) e^{-inx} dx` of convolution by `h`.
///
/// `h_samples[j]` is `h(−π + 2πj/M)`; the trapezoid rule on the periodic grid
/// is a plain sum. Eigenvalues outside the range tend to 0, so the listed
/// ones determine the periodic subspace.
pub fn convolution_eigenvalues(
    h_samples: &[Complex64],
    n_range: std::ops::RangeInclusive<i64>,
    tol: f64,
    max_order: u64,
) -> ConvolutionReport {
    let m = h_samples.len();
    assert!(m >= 16, "grid needs at least 16 samples");
    let weight = TAU / m as f64 / TAU.sqrt();
    let eigenvalues: Vec<(i64, Complex64)> = n_range
        .map(|n| {
            let sum: Complex64 = h_samples
                .iter()
                .enumerate()
                .map(|(j, h)| h * Complex64::from_polar(1.0, -(n as f64) * (-PI + TAU * j as f64 / m as f64)))
                .sum();
            (n, sum * weight)
        })
        .collect();
    let model = DiagonalModel::ZeroTail(
        eigenvalues
            .iter()
            .map(|&(_, z)| {
                let snap = nearest_root_of_unity(z, max_order);
                if snap.distance < tol {
                    Eigenvalue::OnCircle { value: UnitScalar::rational(snap.p, snap.q).expect("q ≥ 1") }
                } else {
                    Eigenvalue::other(z)
                }
            })
            .collect(),
    );
    let note = compactness_note(&model, true).expect("a listed prefix with zero tail is compact");
    let periodic = note.periodic_indices.iter().map(|&i| eigenvalues[i as usize - 1].0).collect();
    ConvolutionReport { eigenvalues, periodic, dim_periodic: note.dim_periodic }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(m: usize) -> impl Iterator<Item = f64> {
        (0..m).map(move |j| -PI + TAU * j as f64 / m as f64)
    }

    fn u(n: i64, x: f64) -> Complex64 {
        Complex64::from_polar(1.0 / TAU.sqrt(), n as f64 * x)
    }

    #[test]
    fn single_mode() {
        let h: Vec<_> = grid(1024).map(|x| u(1, x)).collect();
        let r = convolution_eigenvalues(&h, -4..=4, 1e-6, 12);
        for &(n, l) in &r.eigenvalues {
            if n == 1 {
                assert!((l - 1.0).norm() < 1e-6);
            } else {
                assert!(l.norm() < 1e-6, "n={n} λ={l}");
            }
        }
        assert_eq!(r.periodic, vec![1]);
        assert_eq!(r.dim_periodic, 1);
    }

    #[test]
    fn zero_kernel() {
        let r = convolution_eigenvalues(&[Complex64::new(0.0, 0.0); 64], -3..=3, 1e-6, 12);
        assert!(r.eigenvalues.iter().all(|(_, l)| l.norm() == 0.0));
        assert_eq!(r.dim_periodic, 0);
    }

    #[test]
    fn two_modes() {
        let h: Vec<_> = grid(1024).map(|x| u(1, x) + u(2, x)).collect();
        let r = convolution_eigenvalues(&h, -4..=4, 1e-6, 12);
        assert_eq!(r.periodic, vec![1, 2]);
        assert_eq!(r.dim_periodic, 2);
    }

    #[test]
    fn roots_of_unity_other_than_one() {
        let h: Vec<_> = grid(256).map(|x| u(-2, x) * Complex64::new(0.0, 1.0) + u(3, x) * 0.5).collect();
        let r = convolution_eigenvalues(&h, -4..=4, 1e-6, 12);
        assert_eq!(r.periodic, vec![-2]);
    }
}
