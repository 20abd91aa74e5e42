use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use perop::approximation::approximate;
use perop::diagonal::{self, classify_diagonal};
use perop::permutation::{self, apply_to_vector, classify_permutation, PermutationSpec};
use perop::sampling;
use perop::{Cardinal, ExactVector, PeriodicKind, SpectrumSpec, UnitScalar};

fn rational() -> impl Strategy<Value = (u64, u64)> {
    (1u64..200).prop_flat_map(|q| (0..q, Just(q)))
}

fn scalar() -> impl Strategy<Value = UnitScalar> {
    prop_oneof![
        rational().prop_map(|(p, q)| UnitScalar::rational(p, q).unwrap()),
        (rational(), -20i64..20).prop_filter_map("nonzero multiplier", |((p, q), m)| {
            let offset = BigRational::new(BigInt::from(p), BigInt::from(q));
            UnitScalar::sqrt2_multiple(offset, m).ok()
        }),
    ]
}

fn seeded() -> impl Strategy<Value = ChaCha8Rng> {
    any::<u64>().prop_map(ChaCha8Rng::seed_from_u64)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() < tol
}

proptest! {
    #[test]
    fn order_and_power_laws((p, q) in rational(), k in -500i64..500) {
        let z = UnitScalar::rational(p, q).unwrap();
        let order = z.order().unwrap();
        let expected = BigUint::from(q / p.gcd(&q));
        prop_assert_eq!(&order, &expected);
        let k_abs = BigUint::from(k.unsigned_abs());
        let power_order = z.pow(k).order().unwrap();
        prop_assert_eq!(power_order, &order / order.gcd(&k_abs));
        prop_assert!(z.pow(i64::try_from(&order).unwrap()).is_identity());
        prop_assert_eq!(z.pow(-1), z.conj());
    }

    #[test]
    fn irrational_powers_stay_irrational(z in scalar(), k in 1i64..50) {
        prop_assert_eq!(z.pow(k).is_root_of_unity(), z.is_root_of_unity());
        prop_assert!(close(z.pow(k).to_complex(), z.to_complex().powi(k as i32), 1e-9));
    }

    #[test]
    fn snap_distance_bounds(z in scalar(), n in 1u32..40) {
        let snap = z.nearest_dyadic(n);
        let half_step = 2.0 * (PI / 2f64.powi(n as i32 + 1)).sin();
        prop_assert!(snap.chord_distance <= half_step + 1e-15);
        prop_assert!(half_step <= 2.0 * (PI / 2f64.powi(n as i32)).sin());
        prop_assert!(half_step <= 2.0 * PI / 2f64.powi(n as i32));
        prop_assert!((snap.value().to_complex() - z.to_complex()).norm() - snap.chord_distance < 1e-9);
        prop_assert!(snap.k < BigUint::one() << n as usize);
    }

    #[test]
    fn metadata_agrees_with_prefix(mut rng in seeded()) {
        let spec = if rand::Rng::random_bool(&mut rng, 0.5) {
            sampling::random_rational_spec(&mut rng, 24, 20)
        } else {
            sampling::random_unit_prefix_spec(&mut rng, 20)
        };
        let meta = spec.metadata();
        prop_assert!(meta.is_coherent());
        let values = spec.prefix_values(200);
        let in_g = values.iter().filter(|v| v.is_root_of_unity()).count();
        if meta.all_in_g {
            prop_assert_eq!(in_g, 200);
        }
        if let Some(Cardinal::Finite(lcm)) = &meta.g_value_order_lcm {
            for v in values.iter().filter(|v| v.is_root_of_unity()) {
                prop_assert!((lcm % v.order().unwrap()).is_zero());
            }
        }
        if let Cardinal::Finite(n) = &meta.non_g_index_count {
            prop_assert!(BigUint::from(200 - in_g) <= *n);
        }
    }

    #[test]
    fn adjoint_keeps_classification(mut rng in seeded()) {
        let spec = sampling::random_unit_prefix_spec(&mut rng, 30);
        prop_assert_eq!(classify_diagonal(&spec.adjoint()), classify_diagonal(&spec));
        prop_assert_eq!(spec.adjoint().adjoint(), spec);
    }

    #[test]
    fn permutations_are_bijections(mut rng in seeded()) {
        let spec = sampling::random_permutation_spec(&mut rng, 3);
        let mut images = BTreeSet::new();
        for n in 1..=2000u64 {
            let m = spec.apply(n);
            prop_assert_eq!(spec.apply_inverse(m), n);
            prop_assert_eq!(spec.apply(spec.apply_inverse(n)), n);
            prop_assert!(images.insert(m));
            prop_assert_eq!(spec.apply_pow(n, 1), m);
            prop_assert_eq!(spec.apply_pow(n, -1), spec.apply_inverse(n));
        }
    }

    #[test]
    fn inverse_keeps_classification(mut rng in seeded()) {
        let spec = sampling::random_permutation_spec(&mut rng, 3);
        let c = classify_permutation(&spec);
        prop_assert_eq!(&classify_permutation(&spec.inverse()), &c);
        prop_assert!(c.is_consistent());
        let codim_ok = match &c.closure_codimension {
            Cardinal::Finite(n) => n.is_zero(),
            Cardinal::Infinite => true,
        };
        prop_assert!(codim_ok, "finite nonzero codimension for {:?}", spec);
    }

    #[test]
    fn permutation_period_is_least(mut rng in seeded()) {
        let spec = sampling::random_finite_cycles(&mut rng, 16);
        let x = sampling::random_exact_vector(&mut rng, 20, 4);
        let period = permutation::period_of_vector(&spec, &x).unwrap();
        let p = i64::try_from(&period).unwrap();
        prop_assert_eq!(apply_to_vector(&spec, &x, p), x.clone());
        for k in 1..p {
            prop_assert_ne!(apply_to_vector(&spec, &x, k), x.clone());
        }
        let exponent = classify_permutation(&spec).exponent.unwrap();
        prop_assert!((exponent % &period).is_zero());
    }

    #[test]
    fn diagonal_period_is_least(mut rng in seeded()) {
        let spec = sampling::random_rational_spec(&mut rng, 24, 20);
        let x = sampling::random_exact_vector(&mut rng, 40, 3);
        let period = diagonal::period_of_vector(&spec, &x).unwrap();
        let p = i64::try_from(&period).unwrap();
        let fixed = |k: i64| x.support().all(|n| spec.value_at(n).pow(k).is_identity());
        prop_assert!(fixed(p));
        prop_assert!((1..p).all(|k| !fixed(k)));
        if let Some(Cardinal::Finite(lcm)) = spec.metadata().g_value_order_lcm {
            prop_assert!((lcm % &period).is_zero());
        }
    }

    #[test]
    fn snapped_levels_nest(mut rng in seeded(), n in 1u32..12) {
        let spec = sampling::random_unit_prefix_spec(&mut rng, 40);
        let res = approximate(&spec, n, 40, true).unwrap();
        let c = classify_diagonal(&res.snapped_spec);
        prop_assert_eq!(c.kind, PeriodicKind::WholeSpace);
        prop_assert!(((BigUint::one() << n as usize) % c.exponent.unwrap()).is_zero());
        for level in [n, n + 1, n + 5] {
            prop_assert_eq!(approximate(&res.snapped_spec, level, 40, false).unwrap().observed_error, 0.0);
        }
    }

    #[test]
    fn json_round_trips(mut rng in seeded()) {
        let spec = sampling::random_unit_prefix_spec(&mut rng, 10).with_override(3, sampling::random_irrational(&mut rng)).unwrap();
        let spec = if rand::Rng::random_bool(&mut rng, 0.5) { spec.adjoint() } else { spec };
        let text = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(serde_json::from_str::<SpectrumSpec>(&text).unwrap(), spec);

        let perm = sampling::random_permutation_spec(&mut rng, 3);
        let text = serde_json::to_string(&perm).unwrap();
        prop_assert_eq!(serde_json::from_str::<PermutationSpec>(&text).unwrap(), perm);

        let x = sampling::random_exact_vector(&mut rng, 30, 5);
        let text = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExactVector>(&text).unwrap(), x.clone());
        prop_assert_eq!(x.to_string().parse::<ExactVector>().unwrap(), x);
    }
}

#[test]
fn reduced_fractions_are_distinct() {
    let values = SpectrumSpec::roots_enum().prefix_values(3000);
    let distinct: BTreeSet<String> = values.iter().map(|v| v.to_string()).collect();
    assert_eq!(distinct.len(), values.len());
    assert!(values.iter().all(|v| v.is_root_of_unity()));
}
