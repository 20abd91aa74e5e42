use num_bigint::BigUint;
use perop::approximation::approximate;
use perop::operator::OperatorSpec;
use perop::permutation::{self, naive_union_member, verify_structured_period};
use perop::{diagonal, Error, ExactVector, GroupedVector, VectorSpec};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::Report;
use crate::spec_file::SpecFile;
use crate::Settings;

pub fn classify(file: &SpecFile) -> Result<Report, CliError> {
    let c = file.operator.classify();
    let text = format!("{c}\nrule: {}", c.rule.describe());
    Ok(Report::new(json!({ "classification": c, "summary": c.rule.describe() }), text))
}

fn exact_period(op: &OperatorSpec, x: &ExactVector, power: Option<u64>) -> Result<(Value, String), CliError> {
    let result = match op {
        OperatorSpec::Diagonal(s) => diagonal::period_of_vector(s, x),
        OperatorSpec::Permutation(p) => permutation::period_of_vector(p, x),
    };
    match result {
        Ok(period) => {
            let mut line = format!("{x}: period {period}");
            let mut entry = json!({ "vector": x.to_string(), "verdict": "periodic", "period": period.to_string() });
            if let Some(m) = power {
                let fixed = (BigUint::from(m) % &period) == BigUint::from(0u32);
                entry["power"] = json!(m);
                entry["fixed"] = json!(fixed);
                line.push_str(&format!("\nT^{m} x = x: {fixed}"));
            }
            Ok((entry, line))
        }
        Err(Error::NotPeriodic(reason)) => Ok((
            json!({ "vector": x.to_string(), "verdict": "not_periodic", "reason": reason }),
            format!("{x}: not periodic ({reason})"),
        )),
        Err(e) => Err(e.into()),
    }
}

fn grouped_period(
    op: &OperatorSpec,
    g: &GroupedVector,
    power: Option<u64>,
    max_m: u64,
) -> Result<(Value, String), CliError> {
    if let Some(x) = g.as_exact() {
        return exact_period(op, &x, power);
    }
    let OperatorSpec::Permutation(spec) = op else {
        return Err(CliError::unsupported("grouped vectors with infinite support need a permutation operator"));
    };
    let naive = match naive_union_member(spec, &VectorSpec::Grouped(g.clone())) {
        Ok(b) => json!(b),
        Err(Error::UnsupportedSelector(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let mut entry = json!({ "vector": "grouped", "square_summable": g.square_summable(), "naive_union_member": naive });
    let mut lines = vec![format!("grouped vector, naive union member: {naive}")];
    match power {
        Some(m) => {
            let fixed = verify_structured_period(spec, g, m)?;
            entry["power"] = json!(m);
            entry["fixed"] = json!(fixed);
            lines.push(format!("T^{m} x = x: {fixed}"));
        }
        None => {
            let mut period = None;
            for m in 1..=max_m {
                if verify_structured_period(spec, g, m)? {
                    period = Some(m);
                    break;
                }
            }
            match period {
                Some(m) => {
                    entry["verdict"] = json!("periodic");
                    entry["period"] = json!(m.to_string());
                    lines.push(format!("T^{m} x = x: true"));
                }
                None => {
                    entry["verdict"] = json!("not_found_within_horizon");
                    entry["horizon"] = json!(max_m);
                    lines.push(format!("no M <= {max_m} with T^M x = x"));
                }
            }
        }
    }
    Ok((entry, lines.join("\n")))
}

pub fn period(
    file: &SpecFile,
    vector: Option<&str>,
    power: Option<u64>,
    settings: &Settings,
) -> Result<Report, CliError> {
    let vectors = match vector {
        Some(text) => vec![VectorSpec::Exact(text.parse::<ExactVector>()?)],
        None if file.vectors.is_empty() => {
            return Err(CliError::schema("no vector given and the spec file lists none"))
        }
        None => file.vectors.clone(),
    };
    let max_m = settings.max_m(file);
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for v in &vectors {
        let (entry, line) = match v {
            VectorSpec::Exact(x) => exact_period(&file.operator, x, power)?,
            VectorSpec::Grouped(g) => grouped_period(&file.operator, g, power, max_m)?,
        };
        entries.push(entry);
        lines.push(line);
    }
    Ok(Report::new(json!({ "vectors": entries }), lines.join("\n")))
}

pub fn approximate_cmd(
    file: &SpecFile,
    level: u32,
    probe: Option<u64>,
    settings: &Settings,
) -> Result<Report, CliError> {
    let spec = match &file.operator {
        OperatorSpec::Diagonal(s) => s,
        OperatorSpec::Permutation(_) => {
            return Err(CliError::impossible(
                "finite-order approximation applies to diagonal operators only; \
                 distinct permutation operators are at least sqrt(2) apart in norm, \
                 so nearby permutation operators never converge to this one",
            ))
        }
    };
    let probe = probe.unwrap_or(settings.d(file) as u64);
    let res = approximate(spec, level, probe, true)?;
    let text = format!(
        "level {}: observed error {:.3e} <= bound {:.3e} (tight {:.3e}), snapped exponent {}{}",
        res.level,
        res.observed_error,
        res.error_bound,
        res.tight_bound,
        res.exponent,
        if res.probe_limited { format!(", exact on 1..={probe} only") } else { String::new() }
    );
    Ok(Report::new(&res, text))
}
