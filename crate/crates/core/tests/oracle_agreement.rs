//! The numeric oracle against the exact layer, over the sample operator files.

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use perop::diagonal::{self, root_of_unity_indices};
use perop::operator::OperatorSpec;
use perop::oracle::{
    brute_force_periodic_basis, detect_period, inf_norm, kernel_compare, pow_matrix, resolvable_indices, truncate,
    truncate_cyclic, truncate_diagonal, GapTracker,
};
use perop::permutation::PermutationSpec;
use perop::sampling;
use perop::{Error, ExactVector, PeriodicKind, SpectrumSpec};

const TOL: f64 = 1e-9;
const MAX_M: u64 = 16384;

fn corpus() -> Vec<(String, OperatorSpec)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut out: Vec<(String, OperatorSpec)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| {
            let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let op = serde_json::from_value(value["operator"].clone()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), op)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn diagonal_corpus() -> Vec<(String, SpectrumSpec)> {
    corpus()
        .into_iter()
        .filter_map(|(name, op)| match op {
            OperatorSpec::Diagonal(s) => Some((name, s)),
            OperatorSpec::Permutation(_) => None,
        })
        .collect()
}

/// Largest `d ≤ 256` at which every exact period is resolved by the default horizon.
fn resolved_dimension(spec: &SpectrumSpec) -> usize {
    let exact: BTreeSet<u64> = root_of_unity_indices(spec, 256, Some(&BigUint::from(MAX_M))).into_iter().collect();
    let seen = resolvable_indices(spec, 256, MAX_M, TOL);
    (1..=256u64).take_while(|k| exact.contains(k) == seen.contains(k)).count()
}

#[test]
fn corpus_parses_and_has_both_kinds() {
    let ops = corpus();
    assert!(ops.len() >= 8);
    assert!(ops.iter().any(|(_, op)| matches!(op, OperatorSpec::Diagonal(_))));
    assert!(ops.iter().any(|(_, op)| matches!(op, OperatorSpec::Permutation(_))));
}

#[test]
fn resolved_dimensions() {
    for (name, spec) in diagonal_corpus() {
        let d = resolved_dimension(&spec);
        match name.as_str() {
            // α_34 = e^{2πi/2^33} is already within tol of 1 though its order exceeds the horizon.
            "dyadic_codim1" => assert_eq!(d, 33, "{name}"),
            _ => assert_eq!(d, 256, "{name}"),
        }
    }
}

#[test]
fn periods_agree_on_basis_pairs() {
    for (name, spec) in diagonal_corpus() {
        let d = resolved_dimension(&spec).max(2);
        let op = truncate_diagonal(&spec, d);
        for j in 1..=d as u64 {
            for k in [j, (j % d as u64) + 1, (j * 7 % d as u64) + 1] {
                let x: ExactVector = if j == k { format!("e{j}") } else { format!("e{j} + 2*e{k}") }.parse().unwrap();
                let numeric = detect_period(&op, &x.to_dense(d), MAX_M, TOL);
                match diagonal::period_of_vector(&spec, &x) {
                    Ok(p) if p <= BigUint::from(MAX_M) => assert_eq!(numeric, p.to_u64(), "{name} {x}"),
                    Ok(_) | Err(Error::NotPeriodic(_)) => assert_eq!(numeric, None, "{name} {x}"),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

#[test]
fn brute_force_basis_matches_prediction() {
    let cap = BigUint::from(MAX_M);
    for (name, op) in corpus() {
        match &op {
            OperatorSpec::Diagonal(spec) => {
                let d = resolved_dimension(spec);
                let found = brute_force_periodic_basis(&truncate_diagonal(spec, d), MAX_M, TOL);
                let predicted: BTreeSet<u64> = root_of_unity_indices(spec, d, Some(&cap)).into_iter().collect();
                assert_eq!(found, predicted, "{name}");
            }
            OperatorSpec::Permutation(spec) => match truncate(&op, 64) {
                Ok(t) => {
                    let predicted: BTreeSet<u64> = (1..=t.d as u64).collect();
                    assert_eq!(brute_force_periodic_basis(&t, MAX_M, TOL), predicted, "{name}");
                }
                Err(Error::OrbitClosureUnavailable(_)) => {
                    assert!((1..=64).any(|n| spec.orbit_max(n).is_none()), "{name}");
                }
                Err(e) => panic!("{name}: {e}"),
            },
        }
    }
}

#[test]
fn codim1_divergence_past_resolution() {
    let (_, spec) = diagonal_corpus().into_iter().find(|(n, _)| n == "dyadic_codim1").unwrap();
    let found = brute_force_periodic_basis(&truncate_diagonal(&spec, 64), MAX_M, TOL);
    assert_eq!(found, resolvable_indices(&spec, 64, MAX_M, TOL));
    let expected: BTreeSet<u64> = (2..=15).chain(34..=64).collect();
    assert_eq!(found, expected);
}

#[test]
fn whole_space_exponents_hold_numerically() {
    for (name, op) in corpus() {
        let c = op.classify();
        if c.kind != PeriodicKind::WholeSpace {
            continue;
        }
        let n = c.exponent.unwrap().to_u64().unwrap();
        for d in [1, 7, 16, 64] {
            let t = truncate(&op, d).unwrap();
            let m = t.to_matrix();
            let residual = inf_norm(&(pow_matrix(&m, n) - nalgebra::DMatrix::identity(t.d, t.d)));
            assert!(residual < 1e-9, "{name} d={d} residual {residual}");
            let all: BTreeSet<u64> = (1..=t.d as u64).collect();
            assert!(kernel_compare(&t, n, &all).agrees, "{name} d={d}");
        }
    }
}

#[test]
fn closed_kernels_match_the_g_index_set() {
    let spec = SpectrumSpec::irrational_dense()
        .with_override(2, "1/4".parse().unwrap())
        .unwrap()
        .with_override(5, "5/6".parse().unwrap())
        .unwrap();
    let c = diagonal::classify_diagonal(&spec);
    assert_eq!(c.kind, PeriodicKind::ClosedProper);
    let k = c.kernel_exponent.unwrap().to_u64().unwrap();
    let predicted: BTreeSet<u64> = [2, 5].into();
    assert!(kernel_compare(&truncate_diagonal(&spec, 12), k, &predicted).agrees);
}

#[test]
fn truncations_are_unitary() {
    for (name, op) in corpus() {
        let t = match truncate(&op, 40) {
            Ok(t) => t,
            Err(Error::OrbitClosureUnavailable(_)) => {
                let OperatorSpec::Permutation(p) = &op else { unreachable!() };
                truncate_cyclic(p, 40).unwrap()
            }
            Err(e) => panic!("{name}: {e}"),
        };
        assert!(t.unitary_defect() < 1e-12, "{name}");
    }
}

#[test]
fn gaps_shrink_monotonically() {
    for spec in [SpectrumSpec::irrational_dense(), SpectrumSpec::roots_enum()] {
        let mut tracker = GapTracker::new();
        let mut last = f64::INFINITY;
        for v in spec.values().take(10_000) {
            let gap = tracker.push(v.to_complex());
            assert!(gap <= last);
            last = gap;
        }
        assert!(last <= 0.1);
    }
}

#[test]
fn cyclic_surrogate_period() {
    let t = truncate_cyclic(&PermutationSpec::ZigzagShift, 64).unwrap();
    assert!(t.surrogate);
    let x: Vec<Complex64> = (0..64).map(|j| Complex64::new(1.0 + j as f64, 0.5 * j as f64) / 80.0).collect();
    assert_eq!(detect_period(&t, &x, MAX_M, TOL), Some(64));
    let mut e1 = vec![Complex64::new(0.0, 0.0); 64];
    e1[0] = Complex64::new(1.0, 0.0);
    assert_eq!(detect_period(&t, &e1, MAX_M, TOL), Some(64));
}

#[test]
fn random_permutation_truncations_agree_with_exact_periods() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let spec = sampling::random_finite_cycles(&mut rng, 16);
        let x = sampling::random_exact_vector(&mut rng, 16, 4);
        let t = truncate(&OperatorSpec::Permutation(spec.clone()), 16).unwrap();
        let exact = perop::permutation::period_of_vector(&spec, &x).unwrap();
        assert_eq!(detect_period(&t, &x.to_dense(t.d), MAX_M, TOL), exact.to_u64());
    }
}
