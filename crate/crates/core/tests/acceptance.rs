//! Exit criteria. Each check prints one PASS/FAIL line; any FAIL exits nonzero.

use std::collections::BTreeSet;
use std::f64::consts::{PI, SQRT_2};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use perop::approximation::approximate;
use perop::diagonal::{self, classify_diagonal, root_of_unity_indices};
use perop::operator::OperatorSpec;
use perop::oracle::{
    brute_force_periodic_basis, dense_normal, detect_period, difference_norm, first_gap_below, normal_matrix_exponent,
    permutation_difference_norm, truncate_diagonal, truncate_permutation, vec_inf_norm,
};
use perop::permutation::{classify_permutation, naive_union_member, verify_structured_period, PermutationSpec};
use perop::sampling;
use perop::{Cardinal, GroupedVector, PeriodicKind, SpectrumSpec, UnitScalar, VectorSpec};

const TOL: f64 = 1e-9;
const MAX_M: u64 = 16384;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn basis_vector(d: usize, k: usize) -> Vec<Complex64> {
    let mut x = vec![Complex64::new(0.0, 0.0); d];
    x[k - 1] = Complex64::new(1.0, 0.0);
    x
}

fn format_set(set: &BTreeSet<u64>) -> String {
    let mut runs: Vec<String> = Vec::new();
    let items: Vec<u64> = set.iter().copied().collect();
    let mut i = 0;
    while i < items.len() {
        let mut j = i;
        while j + 1 < items.len() && items[j + 1] == items[j] + 1 {
            j += 1;
        }
        runs.push(if i == j { items[i].to_string() } else { format!("{}..{}", items[i], items[j]) });
        i = j + 1;
    }
    format!("{{{}}}", runs.join(", "))
}

fn codim1_spec() -> SpectrumSpec {
    let a1 = UnitScalar::sqrt2_multiple(BigRational::zero(), 2).unwrap();
    SpectrumSpec::dyadic().with_override(1, a1).unwrap()
}

fn criterion_1() -> Outcome {
    let spec = codim1_spec();
    let c = classify_diagonal(&spec);
    let symbolic = !c.closed
        && !c.dense
        && c.closure_codimension == Cardinal::finite(1u32)
        && c.kind == PeriodicKind::ProperNonClosed;
    let found = brute_force_periodic_basis(&truncate_diagonal(&spec, 64), MAX_M, TOL);
    let expected: BTreeSet<u64> = (2..=64).collect();
    let missing: BTreeSet<u64> = expected.difference(&found).copied().collect();
    outcome(
        symbolic && found == expected,
        format!(
            "symbolic kind={:?} codim={} ok={symbolic}; oracle d=64 max_m={MAX_M} tol={TOL:e} found {} missing {}",
            c.kind,
            c.closure_codimension,
            format_set(&found),
            format_set(&missing)
        ),
    )
}

fn criterion_2() -> Outcome {
    let spec = SpectrumSpec::harmonic();
    let kind = classify_diagonal(&spec).kind;
    let op = truncate_diagonal(&spec, 64);
    let wrong: Vec<(usize, Option<u64>)> = (1..=64)
        .map(|n| (n, detect_period(&op, &basis_vector(64, n), MAX_M, TOL)))
        .filter(|&(n, p)| p != Some(n as u64))
        .collect();
    outcome(
        kind == PeriodicKind::ProperDense && wrong.is_empty(),
        format!("kind={kind:?} mismatched periods {wrong:?}"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut specs = vec![SpectrumSpec::irrational_dense()];
    specs.extend((0..20).map(|_| sampling::random_unit_prefix_spec(&mut rng, 128)));
    let mut worst_norm_gap: f64 = 0.0;
    let mut failures = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let exact = truncate_diagonal(spec, 128);
        for n in 1..=10 {
            let res = approximate(spec, n, 128, true).unwrap();
            let c = classify_diagonal(&res.snapped_spec);
            let exponent_ok = c.kind == PeriodicKind::WholeSpace
                && c.exponent.as_ref().is_some_and(|e| (BigUint::from(1u32) << n as usize) % e == BigUint::zero());
            let gap = (difference_norm(&truncate_diagonal(&res.snapped_spec, 128), &exact) - res.observed_error).abs();
            worst_norm_gap = worst_norm_gap.max(gap);
            if res.observed_error > 2.0 * PI / 2f64.powi(n as i32) || !exponent_ok || gap > 1e-9 {
                failures.push((i, n));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("21 specs x 10 levels, worst |norm - observed| = {worst_norm_gap:.2e}, failures {failures:?}"),
    )
}

fn criterion_4() -> Outcome {
    let spec = PermutationSpec::DoublingBlocks;
    let x = GroupedVector::doubling_witness();
    let m2 = verify_structured_period(&spec, &x, 2).unwrap();
    let m1 = verify_structured_period(&spec, &x, 1).unwrap();
    let naive = naive_union_member(&spec, &VectorSpec::Grouped(x.clone())).unwrap();
    let op = truncate_permutation(&spec, 127).unwrap();
    let xt = x.to_dense(op.d);
    let twice = op.apply(&op.apply(&xt));
    let residual = vec_inf_norm(&twice.iter().zip(&xt).map(|(a, b)| a - b).collect::<Vec<_>>());
    outcome(
        m2 && !m1 && !naive && op.d == 127 && residual < 1e-12,
        format!("M=2 {m2}, M=1 {m1}, naive member {naive}, d={} residual {residual:.1e}", op.d),
    )
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn corpus_operators() -> Vec<(String, OperatorSpec)> {
    let mut out = Vec::new();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("specs directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let text = std::fs::read_to_string(&path).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let op: OperatorSpec = serde_json::from_value(value["operator"].clone()).unwrap();
        out.push((path.file_name().unwrap().to_string_lossy().into_owned(), op));
    }
    out
}

fn criterion_5() -> Outcome {
    let mut specs: Vec<PermutationSpec> = corpus_operators()
        .into_iter()
        .filter_map(|(_, op)| match op {
            OperatorSpec::Permutation(p) => Some(p),
            OperatorSpec::Diagonal(_) => None,
        })
        .collect();
    let corpus = specs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    specs.extend((0..100).map(|_| sampling::random_permutation_spec(&mut rng, 3)));
    let bad: Vec<&PermutationSpec> = specs
        .iter()
        .filter(|p| matches!(classify_permutation(p).closure_codimension, Cardinal::Finite(ref n) if !n.is_zero()))
        .collect();
    outcome(bad.is_empty(), format!("{corpus} corpus + 100 random specs, finite nonzero codimension in {bad:?}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cap = BigUint::from(MAX_M);
    let (mut compared, mut beyond, mut mismatches) = (0, 0, Vec::new());
    for i in 0..200 {
        let spec = sampling::random_rational_spec(&mut rng, 24, 64);
        let d = rng.random_range(1..=64u64);
        let x = sampling::random_exact_vector(&mut rng, d, 4);
        let op = truncate_diagonal(&spec, d as usize);
        let exact = diagonal::period_of_vector(&spec, &x).unwrap();
        let numeric = detect_period(&op, &x.to_dense(d as usize), MAX_M, TOL);
        if exact <= cap {
            compared += 1;
            if numeric != exact.to_u64() {
                mismatches.push(format!("#{i} period {exact} vs {numeric:?}"));
            }
        } else {
            beyond += 1;
            if numeric.is_some() {
                mismatches.push(format!("#{i} period {exact} beyond horizon but found {numeric:?}"));
            }
        }
        let predicted: BTreeSet<u64> = root_of_unity_indices(&spec, d as usize, Some(&cap)).into_iter().collect();
        let found = brute_force_periodic_basis(&op, MAX_M, TOL);
        if found != predicted {
            mismatches.push(format!("#{i} basis {} vs {}", format_set(&found), format_set(&predicted)));
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{compared} periods compared, {beyond} beyond horizon, mismatches {mismatches:?}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    let mut worst_defect: f64 = 0.0;
    for i in 0..50 {
        let planted = sampling::planted_normal(&mut rng, 12, 16);
        let op = dense_normal(planted.matrix).unwrap();
        let report = normal_matrix_exponent(&op, planted.exponent.max(27720), TOL).unwrap();
        worst_defect = worst_defect.max(report.unitary_defect);
        if report.exponent != Some(planted.exponent) || report.unitary_defect >= 1e-9 {
            failures.push(format!("#{i} planted {} got {:?}", planted.exponent, report.exponent));
        }
    }
    let block = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 2.0, 0.0].map(|v| Complex64::new(v, 0.0)));
    let rejected = matches!(dense_normal(block), Err(perop::Error::NotNormal(_)));
    outcome(
        failures.is_empty() && rejected,
        format!("50 planted matrices, worst defect {worst_defect:.1e}, failures {failures:?}, non-normal rejected {rejected}"),
    )
}

fn criterion_8() -> Outcome {
    let values = |spec: &SpectrumSpec| spec.values().take(10_000).map(|v| v.to_complex()).collect::<Vec<_>>();
    let dense = first_gap_below(values(&SpectrumSpec::irrational_dense()), 0.1, 10_000);
    let roots = first_gap_below(values(&SpectrumSpec::roots_enum()), 0.1, 10_000);
    let op = truncate_diagonal(&SpectrumSpec::irrational_dense(), 64);
    let found: Vec<usize> =
        (1..=64).filter(|&k| detect_period(&op, &basis_vector(64, k), MAX_M, TOL).is_some()).collect();
    outcome(
        dense.is_some() && roots.is_some() && found.is_empty(),
        format!(
            "gap <= 0.1 at N = {:?} (irrational) and {:?} (roots); e_1..e_64 periodic within horizon {MAX_M}: {found:?}",
            dense.map(|g| g.0),
            roots.map(|g| g.0)
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut smallest = f64::INFINITY;
    for _ in 0..20 {
        let (a, b) = sampling::distinct_permutation_pair(&mut rng, 32);
        smallest = smallest.min(permutation_difference_norm(&a, &b, 32));
    }
    outcome(smallest >= SQRT_2 - 1e-12, format!("smallest truncated norm over 20 pairs {smallest:.15}"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("codimension-one dyadic example", criterion_1, Duration::from_secs(1)),
        ("harmonic roots are dense with period n", criterion_2, Duration::from_secs(1)),
        ("dyadic approximation error bound", criterion_3, Duration::from_secs(5)),
        ("structured period beyond the naive union", criterion_4, Duration::from_secs(1)),
        ("no finite nonzero codimension for permutations", criterion_5, Duration::from_secs(1)),
        ("exact and numeric periods agree", criterion_6, Duration::from_secs(30)),
        ("normal matrices of finite exponent", criterion_7, Duration::from_secs(5)),
        ("spectrum density and missing periods", criterion_8, Duration::from_secs(10)),
        ("distinct permutations are far apart", criterion_9, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let Outcome { pass, detail } = run();
        let elapsed = start.elapsed();
        let ok = pass && elapsed < *budget;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name} [{:.2}s / {}s] {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
