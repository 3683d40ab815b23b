//! Text and JSON rendering. JSON output carries `schema: 1`; everything but
//! the `timings` object is deterministic for a given input and flag set.

use num::traits::{One, Signed, Zero};
use num::Integer;
use quartic_core::inequality::{Expectation, InequalityReport, WeightedInequality};
use quartic_core::oracle::{OracleResult, ZeroSet};
use quartic_core::scalar::{format_rational, Rational};
use quartic_core::verdict::{Verdict, Witness};
use serde_json::{json, Value};

use crate::input::Input;
use crate::pipeline::{Outcome, Question};

pub const SCHEMA: u32 = 1;

/// Decimal text when the denominator has only factors 2 and 5, else `p/q`.
pub fn format_exact(r: &Rational) -> String {
    let mut d = r.denom().clone();
    let two = 2.into();
    let five = 5.into();
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_multiple_of(&two) {
        d /= &two;
        twos += 1;
    }
    while d.is_multiple_of(&five) {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() || r.is_integer() {
        return format_rational(r);
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(num::BigInt::from(10).pow(places as u32));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if *r < Rational::zero() { "-" } else { "" };
    format!("{sign}{int}.{frac}")
}

fn witness_strings(w: &Witness) -> Vec<String> {
    match w {
        Witness::Exact(v) => v.iter().map(format_exact).collect(),
        Witness::Float(v) => v.iter().map(|x| format!("{x:.9}")).collect(),
    }
}

/// Six decimals, without a sign on values that round to zero.
fn fixed(x: f64) -> String {
    let s = format!("{x:.6}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn floats(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| fixed(*x)).collect();
    format!("({})", parts.join(", "))
}

fn question_label(q: Question) -> &'static str {
    match q {
        Question::PositiveDefinite => "pd",
        Question::PositiveSemidefinite => "psd",
    }
}

fn input_json(input: &Input) -> Value {
    json!({
        "digest": format!("sha256:{}", input.digest()),
        "kind": input.kind.label(),
        "dim": input.tensor.dim(),
    })
}

fn symmetrization_json(input: &Input) -> Value {
    json!({
        "symmetric": input.max_deviation.is_zero(),
        "max_deviation": format_rational(&input.max_deviation),
    })
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "class": v.class.label(),
        "rule": v.rule.to_string(),
        "witness": v.witness.as_ref().map(witness_strings),
    })
}

pub fn check_json(input: &Input, question: Question, outcome: &Outcome) -> Value {
    let trace: Vec<Value> = outcome
        .trace
        .iter()
        .map(|s| {
            let mut v = verdict_json(&s.verdict);
            v["stage"] = json!(s.stage.label());
            v
        })
        .collect();
    let timings: serde_json::Map<String, Value> = outcome
        .trace
        .iter()
        .map(|s| (format!("{}_us", s.stage.label()), json!(s.elapsed_us as u64)))
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "check",
        "question": question_label(question),
        "input": input_json(input),
        "symmetrization": symmetrization_json(input),
        "trace": trace,
        "verdict": verdict_json(&outcome.verdict),
        "witness": outcome.verdict.witness.as_ref().map(witness_strings).unwrap_or_default(),
        "min_value": outcome.min_value,
        "timings": timings,
    })
}

pub fn check_text(input: &Input, question: Question, outcome: &Outcome) -> String {
    let mut out = String::new();
    out += &format!("input: {} dim {} sha256:{}\n", input.kind.label(), input.tensor.dim(), input.digest());
    if !input.max_deviation.is_zero() {
        out += &format!(
            "symmetrization: input was not symmetric, max deviation {}\n",
            format_rational(&input.max_deviation)
        );
    }
    out += &format!("question: {}\n", question_label(question));
    for s in &outcome.trace {
        out += &format!("  {:<16} {}\n", s.stage.label(), s.verdict);
    }
    out += &format!("verdict: {}\n", outcome.verdict);
    if let Some(w) = &outcome.verdict.witness {
        out += &format!("witness: ({})\n", witness_strings(w).join(", "));
    }
    if let Some(m) = outcome.min_value {
        out += &format!("sphere minimum: {m:.6e}\n");
    }
    out
}

fn numeric_label(res: &OracleResult) -> &'static str {
    use quartic_core::oracle::NumericClass;
    match res.classification {
        NumericClass::PdCertified => "pd-certified",
        NumericClass::Indefinite { .. } => "indefinite",
        NumericClass::Boundary => "boundary",
    }
}

pub fn minimize_json(input: &Input, res: &OracleResult, zeros: &ZeroSet, elapsed_us: u128) -> Value {
    json!({
        "schema": SCHEMA,
        "command": "minimize",
        "input": input_json(input),
        "symmetrization": symmetrization_json(input),
        "min_value": res.min_value,
        "minimizer": res.minimizer,
        "classification": numeric_label(res),
        "iterations_used": res.iterations_used,
        "positive_witness": res.positive_witness,
        "zero_set": {"degenerate": zeros.degenerate, "points": zeros.points},
        "timings": {"oracle_us": elapsed_us as u64},
    })
}

pub fn minimize_text(input: &Input, res: &OracleResult, zeros: &ZeroSet) -> String {
    let mut out = format!("input: {} dim {} sha256:{}\n", input.kind.label(), input.tensor.dim(), input.digest());
    out += &format!("min {} at {}\n", fixed(res.min_value), floats(&res.minimizer));
    out += &format!("classification: {} ({} iterations)\n", numeric_label(res), res.iterations_used);
    if zeros.degenerate {
        out += "zero set: degenerate (form vanishes on the entire sample)\n";
    } else if zeros.points.is_empty() {
        out += "zero set: empty\n";
    } else {
        out += "zero set:\n";
        for p in &zeros.points {
            out += &format!("  {}\n", floats(p));
        }
    }
    out
}

pub fn status(ineq: &WeightedInequality, rep: &InequalityReport) -> &'static str {
    match (&ineq.expectation, rep.as_expected) {
        (Expectation::Holds, true) if !rep.equality_points.is_empty() => "HOLDS(equality)",
        (Expectation::Holds, true) => "HOLDS",
        (Expectation::Holds, false) => "FAIL(unexpected)",
        (Expectation::Fails { .. }, true) => "FAIL(expected)",
        (Expectation::Fails { .. }, false) => "MISMATCH(expected fail)",
    }
}

fn point_strings(ineq: &WeightedInequality) -> Option<Vec<String>> {
    match &ineq.expectation {
        Expectation::Fails { point } => Some(point.iter().map(format_exact).collect()),
        Expectation::Holds => None,
    }
}

pub fn inequalities_json(rows: &[(WeightedInequality, InequalityReport)], all_ok: bool, elapsed_us: u128) -> Value {
    let items: Vec<Value> = rows
        .iter()
        .map(|(i, r)| {
            json!({
                "label": r.label,
                "strict": i.strict,
                "exchanged": i.exchanged,
                "status": status(i, r),
                "as_expected": r.as_expected,
                "sphere_min": r.sphere_min,
                "min_point": r.min_point,
                "equality_points": r.equality_points,
                "witness": point_strings(i),
                "witness_value": r.spot_value.as_ref().map(format_exact),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "inequalities",
        "all_as_expected": all_ok,
        "inequalities": items,
        "timings": {"total_us": elapsed_us as u64},
    })
}

pub fn inequalities_text(rows: &[(WeightedInequality, InequalityReport)]) -> String {
    let mut out = format!("{:<14} {:<24} {:>13}  {}\n", "label", "status", "sphere min", "witness / equality points");
    for (i, r) in rows {
        let detail = match point_strings(i) {
            Some(p) => format!(
                "({}) P = {}",
                p.join(", "),
                r.spot_value.as_ref().map(format_exact).unwrap_or_default()
            ),
            None => r.equality_points.iter().map(|p| floats(p)).collect::<Vec<_>>().join(" "),
        };
        let line = format!("{:<14} {:<24} {:>13.6e}  {}", r.label, status(i, r), r.sphere_min, detail);
        out += line.trim_end();
        out.push('\n');
    }
    out
}
