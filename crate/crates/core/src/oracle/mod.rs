//! Finite-dimensional numeric cross-checks on `ℂ^d`.
//!
//! Everything here works with `f64` complex matrices and never consults the
//! exact classification, so agreement with the symbolic side is real evidence.
//! Indices are 1-based in reports and 0-based in vectors.

mod convolution;
mod density;
mod normal;
mod period;

pub use convolution::{convolution_eigenvalues, ConvolutionReport};
pub use density::{circular_gap, first_gap_below, GapTracker};
pub use normal::{nearest_root_of_unity, normal_matrix_exponent, EigenSnap, NormalExponentReport};
pub use period::{
    brute_force_periodic_basis, detect_period, kernel_compare, resolvable_indices, spectral_mapping_check,
    KernelReport, LEAKAGE_TOL, NULL_SINGULAR_TOL,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::OperatorSpec;
use crate::permutation::PermutationSpec;
use crate::spectrum::SpectrumSpec;

/// Orbit-closed truncations larger than this are refused.
pub const ORBIT_CLOSURE_LIMIT: u64 = 1 << 22;

pub const NORMALITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum TruncatedKind {
    Diagonal {
        entries: Vec<Complex64>,
    },
    /// `images[j]` is the 0-based image of the 0-based index `j`.
    Permutation {
        images: Vec<usize>,
    },
    DenseNormal {
        matrix: DMatrix<Complex64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator {
    pub d: usize,
    pub kind: TruncatedKind,
    /// Set for wrap-around sections of infinite orbits, whose finite behaviour differs.
    pub surrogate: bool,
}

pub fn truncate(spec: &OperatorSpec, d_request: usize) -> Result<TruncatedOperator> {
    match spec {
        OperatorSpec::Diagonal(s) => Ok(truncate_diagonal(s, d_request)),
        OperatorSpec::Permutation(p) => truncate_permutation(p, d_request),
    }
}

pub fn truncate_diagonal(spec: &SpectrumSpec, d: usize) -> TruncatedOperator {
    assert!(d >= 1, "dimension must be positive");
    let entries = spec.values().take(d).map(|v| v.to_complex()).collect();
    TruncatedOperator { d, kind: TruncatedKind::Diagonal { entries }, surrogate: false }
}

/// Rounds `d_request` up to the smallest orbit-closed dimension.
pub fn truncate_permutation(spec: &PermutationSpec, d_request: usize) -> Result<TruncatedOperator> {
    assert!(d_request >= 1, "dimension must be positive");
    let d = spec.orbit_closed_prefix(d_request as u64, ORBIT_CLOSURE_LIMIT)? as usize;
    let images = (1..=d as u64).map(|n| spec.apply(n) as usize - 1).collect();
    Ok(TruncatedOperator { d, kind: TruncatedKind::Permutation { images }, surrogate: false })
}

/// Each orbit's slice of `{1..d}`, closed into a cycle in orbit order.
pub fn truncate_cyclic(spec: &PermutationSpec, d: usize) -> Result<TruncatedOperator> {
    if d < 2 {
        return Err(Error::InvalidPermutation("cyclic truncation needs d ≥ 2".into()));
    }
    let mut orbits: std::collections::BTreeMap<u64, Vec<(i64, usize)>> = Default::default();
    for n in 1..=d as u64 {
        let l = spec.locus(n);
        orbits.entry(l.key).or_default().push((l.pos, n as usize - 1));
    }
    let mut images = vec![0; d];
    for members in orbits.values_mut() {
        members.sort_unstable();
        for (i, &(_, j)) in members.iter().enumerate() {
            images[j] = members[(i + 1) % members.len()].1;
        }
    }
    Ok(TruncatedOperator { d, kind: TruncatedKind::Permutation { images }, surrogate: true })
}

/// Accepts a square matrix whose normality defect is below [`NORMALITY_TOL`].
pub fn dense_normal(matrix: DMatrix<Complex64>) -> Result<TruncatedOperator> {
    assert!(matrix.is_square(), "operator matrix must be square");
    let adj = matrix.adjoint();
    let defect = inf_norm(&(&matrix * &adj - &adj * &matrix));
    if defect >= NORMALITY_TOL {
        return Err(Error::NotNormal(defect));
    }
    Ok(TruncatedOperator { d: matrix.nrows(), kind: TruncatedKind::DenseNormal { matrix }, surrogate: false })
}

impl TruncatedOperator {
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        match &self.kind {
            TruncatedKind::Diagonal { entries } => {
                DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
            }
            TruncatedKind::Permutation { images } => {
                let mut m = DMatrix::zeros(self.d, self.d);
                for (j, &i) in images.iter().enumerate() {
                    m[(i, j)] = Complex64::new(1.0, 0.0);
                }
                m
            }
            TruncatedKind::DenseNormal { matrix } => matrix.clone(),
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.d, "vector length must match the dimension");
        match &self.kind {
            TruncatedKind::Diagonal { entries } => entries.iter().zip(x).map(|(a, b)| a * b).collect(),
            TruncatedKind::Permutation { images } => {
                let mut y = vec![Complex64::new(0.0, 0.0); self.d];
                for (j, &i) in images.iter().enumerate() {
                    y[i] = x[j];
                }
                y
            }
            TruncatedKind::DenseNormal { matrix } => {
                (matrix * nalgebra::DVector::from_column_slice(x)).as_slice().to_vec()
            }
        }
    }

    /// `‖T*T − I‖∞`.
    pub fn unitary_defect(&self) -> f64 {
        let m = self.to_matrix();
        inf_norm(&(m.adjoint() * &m - DMatrix::identity(self.d, self.d)))
    }
}

/// Maximum absolute row sum.
pub fn inf_norm(m: &DMatrix<Complex64>) -> f64 {
    m.row_iter().map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn vec_inf_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn pow_matrix(m: &DMatrix<Complex64>, mut k: u64) -> DMatrix<Complex64> {
    let mut result = DMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// `‖A − B‖∞` for two truncations of equal dimension.
pub fn difference_norm(a: &TruncatedOperator, b: &TruncatedOperator) -> f64 {
    assert_eq!(a.d, b.d, "dimensions must agree");
    inf_norm(&(a.to_matrix() - b.to_matrix()))
}

/// Operator 2-norm of `T_a − T_b` restricted to `span{e_1..e_d}`.
///
/// The image space is taken large enough to hold every image, so the
/// restriction is computed exactly up to rounding.
pub fn permutation_difference_norm(a: &PermutationSpec, b: &PermutationSpec, d: usize) -> f64 {
    let cols: Vec<(u64, u64)> = (1..=d as u64).map(|n| (a.apply(n), b.apply(n))).collect();
    let rows = cols.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(1) as usize;
    let mut m = DMatrix::<f64>::zeros(rows, d);
    for (j, &(ia, ib)) in cols.iter().enumerate() {
        m[(ia as usize - 1, j)] += 1.0;
        m[(ib as usize - 1, j)] -= 1.0;
    }
    m.singular_values().max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit_scalar::UnitScalar;

    #[test]
    fn truncation_examples() {
        let t = truncate_permutation(&PermutationSpec::DoublingBlocks, 5).unwrap();
        assert_eq!(t.d, 7);
        assert!(matches!(
            truncate_permutation(&PermutationSpec::ZigzagShift, 8),
            Err(Error::OrbitClosureUnavailable(_))
        ));
        let h = truncate_diagonal(&SpectrumSpec::harmonic(), 4);
        match &h.kind {
            TruncatedKind::Diagonal { entries } => {
                assert_eq!(entries.len(), 4);
                assert!(entries.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cyclic_surrogate() {
        let t = truncate_cyclic(&PermutationSpec::ZigzagShift, 3).unwrap();
        assert!(t.surrogate);
        assert_eq!(t.kind, TruncatedKind::Permutation { images: vec![1, 2, 0] });
        let swap = truncate_cyclic(&PermutationSpec::ZigzagShift, 2).unwrap();
        assert_eq!(swap.kind, TruncatedKind::Permutation { images: vec![1, 0] });
        assert!(truncate_cyclic(&PermutationSpec::ZigzagShift, 1).is_err());
    }

    #[test]
    fn truncations_are_unitary() {
        let ops = [
            truncate_diagonal(&SpectrumSpec::irrational_dense(), 32),
            truncate_permutation(&PermutationSpec::DoublingBlocks, 31).unwrap(),
            truncate_cyclic(&PermutationSpec::ZigzagShift, 20).unwrap(),
        ];
        for op in &ops {
            assert!(op.unitary_defect() < 1e-12);
        }
    }

    #[test]
    fn non_normal_block_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 2.0, 0.0].map(|v| Complex64::new(v, 0.0)));
        assert!(matches!(dense_normal(m), Err(Error::NotNormal(_))));
    }

    #[test]
    fn apply_matches_matrix() {
        let t = truncate_permutation(&PermutationSpec::DoublingBlocks, 7).unwrap();
        let x: Vec<Complex64> = (0..7).map(|j| Complex64::new(j as f64, -(j as f64) / 2.0)).collect();
        let via_matrix = t.to_matrix() * nalgebra::DVector::from_column_slice(&x);
        assert_eq!(t.apply(&x), via_matrix.as_slice());
    }

    #[test]
    fn difference_norms() {
        let a = PermutationSpec::finite_cycles(vec![vec![1, 2]]).unwrap();
        let b = PermutationSpec::identity();
        assert!((permutation_difference_norm(&a, &b, 4) - 2.0).abs() < 1e-12);
        let c = PermutationSpec::finite_cycles(vec![vec![1, 2, 3]]).unwrap();
        assert!(permutation_difference_norm(&c, &b, 3) >= std::f64::consts::SQRT_2);
        assert_eq!(permutation_difference_norm(&b, &b, 3), 0.0);

        let s = SpectrumSpec::constant(UnitScalar::rational(1, 4).unwrap());
        let t = SpectrumSpec::constant(UnitScalar::one());
        let n = difference_norm(&truncate_diagonal(&s, 3), &truncate_diagonal(&t, 3));
        assert!((n - std::f64::consts::SQRT_2).abs() < 1e-12);
    }
}
