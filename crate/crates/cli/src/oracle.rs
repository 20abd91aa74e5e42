use std::collections::BTreeSet;
use std::f64::consts::SQRT_2;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use perop::diagonal::{self, root_of_unity_indices};
use perop::operator::OperatorSpec;
use perop::oracle::{
    brute_force_periodic_basis, circular_gap, detect_period, first_gap_below, inf_norm, kernel_compare,
    permutation_difference_norm, pow_matrix, resolvable_indices, spectral_mapping_check, truncate_cyclic,
    truncate_diagonal, truncate_permutation, TruncatedOperator,
};
use perop::permutation::{self, PermutationSpec};
use perop::sampling::random_exact_vector;
use perop::spectrum::ClaimedClosure;
use perop::{Error, ExactVector, PeriodicKind, SpectrumSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_ORACLE};
use crate::report::{format_indices, Report};
use crate::spec_file::SpecFile;
use crate::Settings;

/// Kernel and power checks build dense matrices; skip them above this size.
const DENSE_LIMIT: usize = 256;
const UNITARY_TOL: f64 = 1e-12;
const DENSITY_EPS: f64 = 0.1;
const DENSITY_SEARCH: usize = 10_000;
const RANDOM_VECTORS: usize = 20;

#[derive(Serialize)]
struct Check {
    check: &'static str,
    d: usize,
    passed: bool,
    result: Value,
    tolerance: f64,
    horizon: u64,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    surrogate: bool,
}

struct Ctx {
    d: usize,
    max_m: u64,
    tol: f64,
    seed: u64,
    checks: Vec<Check>,
}

impl Ctx {
    fn push(&mut self, check: &'static str, passed: bool, result: Value, tolerance: f64) {
        self.checks.push(Check { check, d: self.d, passed, result, tolerance, horizon: self.max_m, surrogate: false });
    }
}

fn power_checks(ctx: &mut Ctx, op: &TruncatedOperator, n: u64, predicted: &BTreeSet<u64>) {
    if op.d > DENSE_LIMIT {
        return;
    }
    let m = op.to_matrix();
    let residual = inf_norm(&(pow_matrix(&m, n) - nalgebra::DMatrix::identity(op.d, op.d)));
    ctx.push("power_identity", residual < ctx.tol, json!({ "power": n, "residual": residual }), ctx.tol);
    let k = kernel_compare(op, n, predicted);
    ctx.push("kernel", k.agrees, serde_json::to_value(&k).expect("serializable"), perop::oracle::LEAKAGE_TOL);
}

fn period_agreement(
    ctx: &mut Ctx,
    op: &TruncatedOperator,
    indices: &[u64],
    exact: impl Fn(&ExactVector) -> Result<BigUint, Error>,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut mismatches = Vec::new();
    let mut compared = 0;
    if indices.is_empty() {
        ctx.push("period_agreement", true, json!({ "compared": 0, "mismatches": [] }), ctx.tol);
        return;
    }
    for _ in 0..RANDOM_VECTORS {
        // Draw on 1..=len, then relabel onto the allowed indices.
        let raw = random_exact_vector(&mut rng, indices.len() as u64, 4);
        let x = ExactVector::from_terms(raw.terms().map(|(n, c)| (indices[n as usize - 1], c.clone())))
            .expect("positive indices");
        let numeric = detect_period(op, &x.to_dense(op.d), ctx.max_m, ctx.tol);
        let expected = match exact(&x) {
            Ok(p) => p.to_u64().filter(|&p| p <= ctx.max_m),
            Err(Error::NotPeriodic(_)) => None,
            Err(e) => panic!("unexpected error for {x}: {e}"),
        };
        compared += 1;
        if numeric != expected {
            mismatches.push(format!("{x}: exact {expected:?}, numeric {numeric:?}"));
        }
    }
    ctx.push(
        "period_agreement",
        mismatches.is_empty(),
        json!({ "compared": compared, "mismatches": mismatches }),
        ctx.tol,
    );
}

fn diagonal_checks(ctx: &mut Ctx, spec: &SpectrumSpec) {
    let d = ctx.d;
    let op = truncate_diagonal(spec, d);
    let found = brute_force_periodic_basis(&op, ctx.max_m, ctx.tol);
    let exact: BTreeSet<u64> = root_of_unity_indices(spec, d, None).into_iter().collect();
    let resolvable = resolvable_indices(spec, d, ctx.max_m, ctx.tol);
    ctx.push(
        "basis_exact",
        found == exact,
        json!({ "found": format_indices(&found), "predicted": format_indices(&exact) }),
        ctx.tol,
    );
    ctx.push(
        "basis_resolvable",
        found == resolvable,
        json!({ "found": format_indices(&found), "predicted": format_indices(&resolvable) }),
        ctx.tol,
    );
    ctx.push("unitary_defect", op.unitary_defect() < UNITARY_TOL, json!(op.unitary_defect()), UNITARY_TOL);
    if d <= DENSE_LIMIT {
        let dev = spectral_mapping_check(&op, 3);
        ctx.push("spectral_mapping", dev < 1e-9, json!({ "power": 3, "deviation": dev }), 1e-9);
    }

    let c = diagonal::classify_diagonal(spec);
    let power = match c.kind {
        PeriodicKind::WholeSpace => c.exponent.as_ref(),
        PeriodicKind::ClosedProper => c.kernel_exponent.as_ref(),
        _ => None,
    };
    if let Some(n) = power.and_then(|n| n.to_u64()).filter(|&n| n <= ctx.max_m) {
        power_checks(ctx, &op, n, &exact);
    }

    // Indices where the horizon sees exactly what the exact layer predicts.
    let capped: BTreeSet<u64> = root_of_unity_indices(spec, d, Some(&BigUint::from(ctx.max_m))).into_iter().collect();
    let consistent: Vec<u64> = (1..=d as u64).filter(|k| capped.contains(k) == resolvable.contains(k)).collect();
    period_agreement(ctx, &op, &consistent, |x| diagonal::period_of_vector(spec, x));

    if spec.metadata().claimed_spectrum_closure == ClaimedClosure::FullCircle {
        let prefix: Vec<_> = spec.values().take(d).map(|v| v.to_complex()).collect();
        let gap_at_d = circular_gap(&prefix);
        let search = first_gap_below(spec.values().map(|v| v.to_complex()), DENSITY_EPS, DENSITY_SEARCH);
        ctx.push(
            "density",
            search.is_some(),
            json!({ "gap_at_d": gap_at_d, "first_n_with_gap_below": search.map(|s| s.0), "search_limit": DENSITY_SEARCH }),
            DENSITY_EPS,
        );
    }
}

fn permutation_checks(ctx: &mut Ctx, spec: &PermutationSpec) -> Result<(), CliError> {
    let (op, surrogate) = match truncate_permutation(spec, ctx.d) {
        Ok(op) => (op, false),
        Err(Error::OrbitClosureUnavailable(_)) => (truncate_cyclic(spec, ctx.d.max(2))?, true),
        Err(e) => return Err(e.into()),
    };
    let first = ctx.checks.len();
    ctx.d = op.d;
    let found = brute_force_periodic_basis(&op, ctx.max_m, ctx.tol);
    let in_horizon = |n: u64| spec.locus(n).len.is_some_and(|l| l <= ctx.max_m);
    let predicted: BTreeSet<u64> =
        if surrogate { (1..=op.d as u64).collect() } else { (1..=op.d as u64).filter(|&n| in_horizon(n)).collect() };
    let infinite = (1..=op.d as u64).filter(|&n| spec.locus(n).len.is_none()).count();
    ctx.push(
        "basis",
        found == predicted,
        json!({ "found": format_indices(&found), "predicted": format_indices(&predicted), "indices_on_infinite_orbits": infinite }),
        ctx.tol,
    );
    ctx.push("unitary_defect", op.unitary_defect() < UNITARY_TOL, json!(op.unitary_defect()), UNITARY_TOL);

    if !surrogate {
        let c = permutation::classify_permutation(spec);
        if let Some(n) = c.exponent.as_ref().and_then(|n| n.to_u64()).filter(|&n| n <= ctx.max_m) {
            power_checks(ctx, &op, n, &predicted);
        }
        let all: Vec<u64> = (1..=op.d as u64).collect();
        period_agreement(ctx, &op, &all, |x| permutation::period_of_vector(spec, x));
    }

    let inverse = spec.inverse();
    if (1..=op.d as u64).any(|n| spec.apply(n) != inverse.apply(n)) {
        let norm = permutation_difference_norm(spec, &inverse, op.d);
        ctx.push("distance_to_inverse", norm >= SQRT_2 - 1e-12, json!(norm), 1e-12);
    }
    for check in &mut ctx.checks[first..] {
        check.surrogate = surrogate;
    }
    Ok(())
}

pub fn oracle(file: &SpecFile, settings: &Settings) -> Result<Report, CliError> {
    let mut ctx = Ctx {
        d: settings.d(file),
        max_m: settings.max_m(file),
        tol: settings.tol(file),
        seed: settings.seed,
        checks: Vec::new(),
    };
    if ctx.d == 0 || ctx.max_m == 0 || ctx.tol.is_nan() || ctx.tol <= 0.0 {
        return Err(CliError::schema("d, max-m and tol must be positive"));
    }
    match &file.operator {
        OperatorSpec::Diagonal(s) => diagonal_checks(&mut ctx, s),
        OperatorSpec::Permutation(p) => permutation_checks(&mut ctx, p)?,
    }
    ctx.checks.sort_by(|a, b| a.check.cmp(b.check));
    let failed: Vec<&str> = ctx.checks.iter().filter(|c| !c.passed).map(|c| c.check).collect();
    let text = ctx
        .checks
        .iter()
        .map(|c| {
            format!(
                "{} {}{} d={} horizon={} tol={:e}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.check,
                if c.surrogate { " (surrogate)" } else { "" },
                c.d,
                c.horizon,
                c.tolerance,
                c.result
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    let code = if failed.is_empty() { 0 } else { EXIT_ORACLE };
    Ok(Report::new(&ctx.checks, text).with_code(code))
}
