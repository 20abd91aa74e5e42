//! Seeded random instances for property and oracle tests.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::permutation::PermutationSpec;
use crate::spectrum::SpectrumSpec;
use crate::unit_scalar::UnitScalar;
use crate::vector::{ExactComplex, ExactVector};

pub fn random_rational<R: Rng>(rng: &mut R, q_max: u64) -> UnitScalar {
    let q = rng.random_range(1..=q_max);
    UnitScalar::rational(rng.random_range(0..q), q).expect("q ≥ 1")
}

/// `frac(r + m√2)` with a small rational offset and multiplier.
pub fn random_irrational<R: Rng>(rng: &mut R) -> UnitScalar {
    let q = rng.random_range(1..=12i64);
    let offset = BigRational::new(BigInt::from(rng.random_range(0..q)), BigInt::from(q));
    let m = rng.random_range(1..=9i64) * if rng.random_bool(0.5) { 1 } else { -1 };
    UnitScalar::sqrt2_multiple(offset, m).expect("nonzero multiplier")
}

/// A periodic or explicit-prefix spec with rational rotations of order at most `q_max`.
pub fn random_rational_spec<R: Rng>(rng: &mut R, q_max: u64, len_max: usize) -> SpectrumSpec {
    let len = rng.random_range(1..=len_max);
    let values: Vec<UnitScalar> = (0..len).map(|_| random_rational(rng, q_max)).collect();
    if rng.random_bool(0.5) {
        SpectrumSpec::periodic(values).expect("nonempty")
    } else {
        SpectrumSpec::explicit_then_constant(values, random_rational(rng, q_max))
    }
}

/// An explicit prefix of unit scalars, roughly a third of them irrational.
pub fn random_unit_prefix_spec<R: Rng>(rng: &mut R, len_max: usize) -> SpectrumSpec {
    let pick = |rng: &mut R| {
        if rng.random_bool(0.35) {
            random_irrational(rng)
        } else {
            random_rational(rng, 1000)
        }
    };
    let len = rng.random_range(1..=len_max);
    let prefix = (0..len).map(|_| pick(rng)).collect();
    SpectrumSpec::explicit_then_constant(prefix, pick(rng))
}

/// A nonzero vector with at most `max_terms` terms on indices `1..=d`.
pub fn random_exact_vector<R: Rng>(rng: &mut R, d: u64, max_terms: usize) -> ExactVector {
    let count = rng.random_range(1..=max_terms.min(d as usize));
    let mut indices: Vec<u64> = (1..=d).collect();
    indices.shuffle(rng);
    let coeff = |rng: &mut R| {
        let part = |rng: &mut R| {
            BigRational::new(BigInt::from(rng.random_range(-4..=4i64)), BigInt::from(rng.random_range(1..=3i64)))
        };
        loop {
            let c = ExactComplex::new(part(rng), part(rng));
            if !c.is_zero() {
                return c;
            }
        }
    };
    let terms: Vec<(u64, ExactComplex)> = indices[..count].iter().map(|&n| (n, coeff(rng))).collect();
    ExactVector::from_terms(terms).expect("indices start at 1")
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian matrix.
pub fn haar_unitary<R: Rng>(rng: &mut R, d: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let (q, r) = g.qr().unpack();
    let phases =
        DMatrix::from_diagonal(
            &r.diagonal().map(|z| if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) }),
        );
    q * phases
}

#[derive(Clone, Debug)]
pub struct PlantedNormal {
    pub matrix: DMatrix<Complex64>,
    pub orders: Vec<u64>,
    /// lcm of the planted orders.
    pub exponent: u64,
}

/// `U D U*` with `D` holding primitive roots of unity of random orders.
pub fn planted_normal<R: Rng>(rng: &mut R, max_order: u64, max_d: usize) -> PlantedNormal {
    let d = rng.random_range(1..=max_d);
    let orders: Vec<u64> = (0..d).map(|_| rng.random_range(1..=max_order)).collect();
    let diag: Vec<Complex64> = orders
        .iter()
        .map(|&q| {
            let p = loop {
                let p = rng.random_range(0..q);
                if p.gcd(&q) == 1 {
                    break p;
                }
            };
            Complex64::from_polar(1.0, std::f64::consts::TAU * p as f64 / q as f64)
        })
        .collect();
    let u = haar_unitary(rng, d);
    let matrix = &u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)) * u.adjoint();
    let exponent = orders.iter().fold(1, |acc, &q| acc.lcm(&q));
    PlantedNormal { matrix, orders, exponent }
}

/// Disjoint cycles on a shuffled subset of `1..=max_elem`.
pub fn random_finite_cycles<R: Rng>(rng: &mut R, max_elem: u64) -> PermutationSpec {
    let mut elems: Vec<u64> = (1..=max_elem).collect();
    elems.shuffle(rng);
    elems.truncate(rng.random_range(0..=max_elem as usize));
    let mut cycles = Vec::new();
    let mut rest = &elems[..];
    while rest.len() >= 2 {
        let len = rng.random_range(2..=rest.len().min(6));
        cycles.push(rest[..len].to_vec());
        rest = &rest[len..];
    }
    PermutationSpec::finite_cycles(cycles).expect("disjoint by construction")
}

/// Finite cycles, or an interleave whose halves may be any family.
pub fn random_permutation_spec<R: Rng>(rng: &mut R, depth: u32) -> PermutationSpec {
    if depth == 0 || rng.random_bool(0.4) {
        return random_finite_cycles(rng, 16);
    }
    let half = |rng: &mut R| match rng.random_range(0..5) {
        0 => PermutationSpec::DoublingBlocks,
        1 => PermutationSpec::constant_blocks(rng.random_range(1..=5)).expect("positive length"),
        2 => PermutationSpec::ZigzagShift,
        3 => random_permutation_spec(rng, depth - 1).inverse(),
        _ => random_permutation_spec(rng, depth - 1),
    };
    let even = half(rng);
    PermutationSpec::interleave(even, half(rng))
}

/// Two specs that differ on some index in `1..=probe`.
pub fn distinct_permutation_pair<R: Rng>(rng: &mut R, probe: u64) -> (PermutationSpec, PermutationSpec) {
    loop {
        let a = random_permutation_spec(rng, 2);
        let b = random_permutation_spec(rng, 2);
        if (1..=probe).any(|n| a.apply(n) != b.apply(n)) {
            return (a, b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_output_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for d in 1..=8 {
            let u = haar_unitary(&mut rng, d);
            let defect = (u.adjoint() * &u - DMatrix::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(defect < 1e-12);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            (
                random_unit_prefix_spec(&mut rng, 10),
                random_permutation_spec(&mut rng, 2),
                random_exact_vector(&mut rng, 9, 3),
            )
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn planted_exponent_is_lcm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = planted_normal(&mut rng, 12, 16);
        assert_eq!(p.orders.len(), p.matrix.nrows());
        assert!(p.orders.iter().all(|q| p.exponent % q == 0));
    }
}
