//! Fixed reports reproducing the worked examples. Output is byte-stable.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use perop::approximation::convergence_table;
use perop::diagonal::{classify_diagonal, period_of_vector, root_of_unity_indices};
use perop::oracle::{convolution_eigenvalues, permutation_difference_norm, truncate_permutation, vec_inf_norm};
use perop::permutation::{classify_permutation, naive_union_member, verify_structured_period, PermutationSpec};
use perop::{ExactVector, GroupedVector, SpectrumSpec, UnitScalar, VectorSpec};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{stable, Report};

pub const NAMES: [&str; 10] = [
    "approximation",
    "codim1",
    "codim3",
    "convolution",
    "dense-roots",
    "harmonic",
    "irrational-dense",
    "permutation-distance",
    "proper-inclusion",
    "residue-mod-4",
];

fn two_root_two() -> UnitScalar {
    UnitScalar::sqrt2_multiple(BigRational::zero(), 2).expect("nonzero multiplier")
}

fn first_values(spec: &SpectrumSpec, n: usize) -> Vec<String> {
    spec.prefix_values(n).iter().map(|v| v.to_string()).collect()
}

fn classified(spec: &SpectrumSpec, extra: Value) -> (Value, String) {
    let c = classify_diagonal(spec);
    let text = format!("{c}\nrule: {}", c.rule.describe());
    let mut json = json!({ "operator": spec, "first_values": first_values(spec, 6), "classification": c });
    if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
        map.extend(more);
    }
    (json, text)
}

fn codim(m: u64) -> (Value, String) {
    let spec = (1..=m).fold(SpectrumSpec::dyadic(), |s, n| s.with_override(n, two_root_two()).expect("index ≥ 1"));
    let basis = root_of_unity_indices(&spec, 12, None);
    let (json, text) = classified(&spec, json!({ "periodic_basis_first_12": basis }));
    (json, format!("{text}\nperiodic basis vectors among e_1..e_12: {basis:?}"))
}

fn convolution() -> (Value, String) {
    let m = 1024;
    let h: Vec<Complex64> =
        (0..m).map(|j| Complex64::from_polar(1.0 / TAU.sqrt(), -PI + TAU * j as f64 / m as f64)).collect();
    let r = convolution_eigenvalues(&h, -4..=4, 1e-6, 12);
    let eigen: Vec<Value> =
        r.eigenvalues.iter().map(|(n, l)| json!({ "n": n, "re": stable(l.re), "im": stable(l.im) })).collect();
    let json = json!({
        "kernel": "u_1",
        "grid": m,
        "eigenvalues": eigen,
        "periodic_frequencies": r.periodic,
        "dim_periodic": r.dim_periodic,
    });
    (json, format!("convolution by u_1: periodic frequencies {:?}, dim P(K) = {}", r.periodic, r.dim_periodic))
}

fn harmonic() -> (Value, String) {
    let spec = SpectrumSpec::harmonic();
    let periods: Vec<String> = (1..=8)
        .map(|n| period_of_vector(&spec, &ExactVector::basis(n).expect("n ≥ 1")).expect("roots of unity").to_string())
        .collect();
    let x: ExactVector = "e2+e3".parse().expect("valid");
    let joint = period_of_vector(&spec, &x).expect("roots of unity");
    let (json, text) =
        classified(&spec, json!({ "basis_periods_1_to_8": periods, "period_e2_plus_e3": joint.to_string() }));
    (json, format!("{text}\nperiods of e_1..e_8: {}\nperiod of e2 + e3: {joint}", periods.join(" ")))
}

fn proper_inclusion() -> Result<(Value, String), CliError> {
    let spec = PermutationSpec::DoublingBlocks;
    let x = GroupedVector::doubling_witness();
    let fixed_2 = verify_structured_period(&spec, &x, 2)?;
    let fixed_1 = verify_structured_period(&spec, &x, 1)?;
    let naive = naive_union_member(&spec, &VectorSpec::Grouped(x.clone()))?;
    let op = truncate_permutation(&spec, 127)?;
    let xt = x.to_dense(op.d);
    let twice = op.apply(&op.apply(&xt));
    let residual = vec_inf_norm(&twice.iter().zip(&xt).map(|(a, b)| a - b).collect::<Vec<_>>());
    let json = json!({
        "operator": spec,
        "classification": classify_permutation(&spec),
        "vector": x,
        "t2x_equals_x": fixed_2,
        "tx_equals_x": fixed_1,
        "naive_union_member": naive,
        "truncation_d": op.d,
        "truncated_residual": stable(residual),
    });
    let text = format!(
        "T^2 x = x: {fixed_2}\nT x = x: {fixed_1}\nnaive union member: {naive}\nresidual at d={}: {}",
        op.d,
        stable(residual)
    );
    Ok((json, text))
}

fn permutation_distance() -> (Value, String) {
    let pairs = [
        (PermutationSpec::identity(), PermutationSpec::finite_cycles(vec![vec![1, 2]]).expect("valid")),
        (PermutationSpec::DoublingBlocks, PermutationSpec::DoublingBlocks.inverse()),
        (PermutationSpec::constant_blocks(3).expect("valid"), PermutationSpec::constant_blocks(4).expect("valid")),
    ];
    let rows: Vec<Value> = pairs
        .iter()
        .map(|(a, b)| json!({ "a": a, "b": b, "truncated_norm_d16": stable(permutation_difference_norm(a, b, 16)) }))
        .collect();
    let text = rows.iter().map(|r| format!("{}", r["truncated_norm_d16"])).collect::<Vec<_>>().join(" ");
    (json!({ "lower_bound": stable(std::f64::consts::SQRT_2), "pairs": rows }), format!("norms of differences: {text}"))
}

fn approximation() -> (Value, String) {
    let spec = SpectrumSpec::irrational_dense();
    let rows: Vec<Value> = convergence_table(&spec, 10, 64)
        .iter()
        .map(|r| json!({ "n": r.n, "observed": stable(r.observed), "bound": stable(r.bound) }))
        .collect();
    let text = rows
        .iter()
        .map(|r| format!("n={} observed {} bound {}", r["n"], r["observed"], r["bound"]))
        .collect::<Vec<_>>()
        .join("\n");
    (json!({ "operator": spec, "probe": 64, "levels": rows }), text)
}

pub fn run(name: &str) -> Result<Report, CliError> {
    let (json, text) = match name {
        "approximation" => approximation(),
        "codim1" => codim(1),
        "codim3" => codim(3),
        "convolution" => convolution(),
        "dense-roots" => classified(&SpectrumSpec::roots_enum(), json!({})),
        "harmonic" => harmonic(),
        "irrational-dense" => classified(&SpectrumSpec::irrational_dense(), json!({})),
        "permutation-distance" => permutation_distance(),
        "proper-inclusion" => proper_inclusion()?,
        "residue-mod-4" => classified(&SpectrumSpec::residue(4)?, json!({})),
        other => {
            return Err(CliError::schema(format!("unknown example {other:?}; known: {}", NAMES.join(", "))));
        }
    };
    Ok(Report::new(json!({ "example": name, "report": json }), text))
}
