//! Classification pipeline: prefilter, family rules, analytic binary, oracle.
//!
//! The final verdict is the first stage that decides the question asked. If
//! none does, it is the last stage with any information (e.g. semidefinite
//! with strictness unknown), else `Undetermined`.

use std::time::Instant;

use num::traits::{One, Signed, Zero};
use quartic_core::binary::{self, BinaryQuartic};
use quartic_core::cyclic::{classify_cyclic, classify_relaxed, CyclicTernary, RelaxedCyclicTernary};
use quartic_core::oracle::{sphere_minimize, verdict_from_result, OracleConfig};
use quartic_core::scalar::Rational;
use quartic_core::verdict::{Class, Rule, Verdict, Witness};
use quartic_core::ExactTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Question {
    PositiveDefinite,
    PositiveSemidefinite,
}

impl Question {
    fn decided_by(self, class: Class) -> bool {
        match self {
            Question::PositiveDefinite => class.decides_pd(),
            Question::PositiveSemidefinite => class.decides_psd(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Full,
    AnalyticOnly,
    OracleOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Prefilter,
    Family,
    AnalyticBinary,
    Oracle,
}

impl Stage {
    pub fn label(self) -> &'static str {
        match self {
            Stage::Prefilter => "prefilter",
            Stage::Family => "family",
            Stage::AnalyticBinary => "analytic-binary",
            Stage::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageResult {
    pub stage: Stage,
    pub verdict: Verdict,
    pub elapsed_us: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub trace: Vec<StageResult>,
    pub verdict: Verdict,
    pub min_value: Option<f64>,
}

/// `e_i` scaled into a full-length witness.
fn lift(dim: usize, coords: &[(usize, Rational)]) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    for (i, x) in coords {
        v[*i] = x.clone();
    }
    v
}

fn pair_quartic(t: &ExactTensor, i: usize, j: usize) -> BinaryQuartic {
    BinaryQuartic::new(
        t.entry([i, i, i, i]),
        t.entry([i, i, i, j]),
        t.entry([i, i, j, j]),
        t.entry([i, j, j, j]),
        t.entry([j, j, j, j]),
    )
}

/// Necessary conditions: non-negative diagonal, semidefinite 2x2 principal
/// subtensors. Only ever answers `Indefinite`.
pub fn prefilter(t: &ExactTensor) -> Verdict {
    let n = t.dim();
    for i in 0..n {
        if t.entry([i, i, i, i]).is_negative() {
            let w = lift(n, &[(i, Rational::one())]);
            return Verdict::new(Class::Indefinite, Rule::Prefilter(format!("negative diagonal entry at {}", i + 1)))
                .with_witness(Some(Witness::Exact(w)));
        }
    }
    if n > 2 {
        for i in 0..n {
            for j in i + 1..n {
                let q = pair_quartic(t, i, j);
                let v = binary::is_positive_semidefinite(&q);
                if v.class == Class::Indefinite {
                    let witness = match v.witness {
                        Some(Witness::Exact(w)) => Some(Witness::Exact(lift(n, &[(i, w[0].clone()), (j, w[1].clone())]))),
                        _ => None,
                    };
                    let reason = format!("principal subtensor ({},{}) not semidefinite", i + 1, j + 1);
                    return Verdict::new(Class::Indefinite, Rule::Prefilter(reason)).with_witness(witness);
                }
            }
        }
    }
    Verdict::undetermined(Rule::NotApplicable)
}

/// Cyclic and relaxed cyclic rules after dividing by a positive `t1111`.
pub fn family(t: &ExactTensor) -> Verdict {
    if t.dim() != 3 {
        return Verdict::undetermined(Rule::NotApplicable);
    }
    if let Some(ct) = CyclicTernary::from_tensor(t) {
        if let Ok(v) = ct.normalized().and_then(|c| classify_cyclic(&c)) {
            if v.class != Class::Undetermined {
                return v;
            }
        }
    }
    if let Some(rt) = RelaxedCyclicTernary::from_tensor(t) {
        if let Ok(v) = rt.normalized().and_then(|r| classify_relaxed(&r)) {
            return v;
        }
    }
    Verdict::undetermined(Rule::NotApplicable)
}

fn analytic_binary(t: &ExactTensor) -> Verdict {
    match BinaryQuartic::from_tensor(t) {
        Ok(q) => binary::classify(&q),
        Err(_) => Verdict::undetermined(Rule::NotApplicable),
    }
}

fn timed(stage: Stage, f: impl FnOnce() -> Verdict) -> StageResult {
    let start = Instant::now();
    let verdict = f();
    StageResult {
        stage,
        verdict,
        elapsed_us: start.elapsed().as_micros(),
    }
}

/// Run the pipeline. Oracle failures (unsupported dimension, bad config) are
/// returned as errors; analytic stages never fail.
pub fn run(t: &ExactTensor, question: Question, mode: Mode, cfg: &OracleConfig) -> quartic_core::Result<Outcome> {
    let mut trace = Vec::new();
    let mut min_value = None;

    if mode != Mode::OracleOnly {
        let analytic = [
            (Stage::Prefilter, prefilter as fn(&ExactTensor) -> Verdict),
            (Stage::Family, family),
            (Stage::AnalyticBinary, analytic_binary),
        ];
        for (stage, f) in analytic {
            let applies = match stage {
                Stage::Family => t.dim() == 3,
                Stage::AnalyticBinary => t.dim() == 2,
                _ => true,
            };
            if !applies {
                continue;
            }
            let r = timed(stage, || f(t));
            let done = question.decided_by(r.verdict.class);
            trace.push(r);
            if done {
                break;
            }
        }
    }
    let decided = trace.iter().any(|r| question.decided_by(r.verdict.class));
    if mode != Mode::AnalyticOnly && !decided {
        let start = Instant::now();
        let res = sphere_minimize(t, cfg)?;
        min_value = Some(res.min_value);
        trace.push(StageResult {
            stage: Stage::Oracle,
            verdict: verdict_from_result(t, &res),
            elapsed_us: start.elapsed().as_micros(),
        });
    }

    let verdict = trace
        .iter()
        .find(|r| question.decided_by(r.verdict.class))
        .or_else(|| trace.iter().rev().find(|r| r.verdict.class != Class::Undetermined))
        .map(|r| r.verdict.clone())
        .unwrap_or_else(|| Verdict::undetermined(Rule::NotApplicable));
    Ok(Outcome {
        trace,
        verdict,
        min_value,
    })
}

/// Exit status for a final class.
pub fn exit_code(class: Class) -> u8 {
    match class {
        Class::PositiveDefinite => 0,
        Class::PositiveSemidefiniteNotDefinite | Class::PositiveSemidefinite => 1,
        Class::Indefinite => 2,
        Class::Undetermined => 3,
    }
}
