//! Classification results shared by the analytic and numeric paths.

use std::fmt;

use serde::Serialize;

use crate::scalar::{format_rational, to_f64, Rational};

/// What is known about the sign of `T x^4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Class {
    PositiveDefinite,
    PositiveSemidefiniteNotDefinite,
    /// Semidefinite, strictness unknown.
    PositiveSemidefinite,
    Indefinite,
    Undetermined,
}

impl Class {
    pub fn is_psd(self) -> bool {
        matches!(
            self,
            Class::PositiveDefinite | Class::PositiveSemidefiniteNotDefinite | Class::PositiveSemidefinite
        )
    }

    pub fn is_pd(self) -> bool {
        self == Class::PositiveDefinite
    }

    /// Settles positive definiteness one way or the other.
    pub fn decides_pd(self) -> bool {
        matches!(
            self,
            Class::PositiveDefinite | Class::PositiveSemidefiniteNotDefinite | Class::Indefinite
        )
    }

    /// Settles positive semidefiniteness one way or the other.
    pub fn decides_psd(self) -> bool {
        self != Class::Undetermined
    }

    pub fn label(self) -> &'static str {
        match self {
            Class::PositiveDefinite => "positive-definite",
            Class::PositiveSemidefiniteNotDefinite => "positive-semidefinite-not-definite",
            Class::PositiveSemidefinite => "positive-semidefinite",
            Class::Indefinite => "indefinite",
            Class::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which rule produced a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Binary quartic, vanishing discriminant with a double-root structure.
    BinaryDoubleRoot,
    /// Binary quartic, positive discriminant and middle coefficient in range.
    BinaryMiddleRange,
    /// Binary quartic, positive discriminant and large middle coefficient.
    BinaryLargeMiddle,
    /// Binary quartic failing the definiteness and semidefiniteness criteria.
    BinaryCriterionFailed,
    /// Binary quartic with a zero diagonal, decided through its residual quadratic.
    BinaryZeroDiagonal,
    /// Necessary diagonal / principal-subtensor condition violated.
    Prefilter(String),
    /// Normalized binary quartic with unit diagonal and unit middle coefficient.
    FastPathUnitMiddle,
    /// Normalized binary quartic with all entries of modulus one.
    FastPathUnitEntries,
    /// Cyclic ternary: explicit counterexample for the same-sign orientation.
    CyclicCounterexample,
    /// Cyclic ternary at the lower endpoint: semidefinite with a known zero.
    CyclicBoundary,
    /// Cyclic ternary, `e` in `(-7/12, -1/6]`, `d = 1`.
    CyclicPdInterval,
    /// Cyclic ternary, `e` in `(-1/6, -5/36]`, `d = 1`.
    CyclicPdIntervalWidened,
    /// Cyclic ternary, PD interval lifted to `d >= 1`.
    CyclicPdLifted,
    /// Cyclic ternary, lower endpoint with `d >= 1`.
    CyclicPsdLifted,
    /// Cyclic ternary below the necessary lower bound `e >= -7/12`.
    CyclicNecessityBound,
    /// Relaxed cyclic ternary, all `e` in `(-7/12, -1/4]`.
    RelaxedLowerInterval,
    /// Relaxed cyclic ternary, all `e` in `[-1/4, -1/6]`.
    RelaxedUpperInterval,
    /// Relaxed cyclic ternary, all `e` in `(-7/12, -5/18]`.
    RelaxedLowerIntervalWidened,
    /// Relaxed cyclic ternary, all `e` in `[-5/18, -1/6]`.
    RelaxedUpperIntervalWidened,
    /// No analytic rule applies.
    NotApplicable,
    /// Sphere minimization.
    Numeric,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::BinaryDoubleRoot => "binary-double-root",
            Rule::BinaryMiddleRange => "binary-middle-range",
            Rule::BinaryLargeMiddle => "binary-large-middle",
            Rule::BinaryCriterionFailed => "binary-criterion-failed",
            Rule::BinaryZeroDiagonal => "binary-zero-diagonal",
            Rule::Prefilter(reason) => return write!(f, "prefilter: {reason}"),
            Rule::FastPathUnitMiddle => "fast-path-unit-middle",
            Rule::FastPathUnitEntries => "fast-path-unit-entries",
            Rule::CyclicCounterexample => "cyclic-counterexample",
            Rule::CyclicBoundary => "cyclic-boundary",
            Rule::CyclicPdInterval => "cyclic-pd-interval",
            Rule::CyclicPdIntervalWidened => "cyclic-pd-interval-widened",
            Rule::CyclicPdLifted => "cyclic-pd-lifted",
            Rule::CyclicPsdLifted => "cyclic-psd-lifted",
            Rule::CyclicNecessityBound => "cyclic-necessity-bound",
            Rule::RelaxedLowerInterval => "relaxed-lower-interval",
            Rule::RelaxedUpperInterval => "relaxed-upper-interval",
            Rule::RelaxedLowerIntervalWidened => "relaxed-lower-interval-widened",
            Rule::RelaxedUpperIntervalWidened => "relaxed-upper-interval-widened",
            Rule::NotApplicable => "not-applicable",
            Rule::Numeric => "numeric",
        };
        f.write_str(s)
    }
}

/// Outcome of a necessary-condition screen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prefilter {
    /// No conclusion.
    Pass,
    /// A necessary condition for semidefiniteness fails.
    FailNecessary(String),
}

/// A point certifying a verdict: negative form value for `Indefinite`, a zero
/// for a semidefinite boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Witness {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Witness::Exact(v) => v.iter().map(to_f64).collect(),
            Witness::Float(v) => v.clone(),
        }
    }

    /// Unit-norm float representative.
    pub fn normalized(&self) -> Vec<f64> {
        let v = self.to_f64();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            v
        } else {
            v.iter().map(|x| x / norm).collect()
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        match self {
            Witness::Exact(v) => v.iter().map(format_rational).collect(),
            Witness::Float(v) => v.iter().map(|x| format!("{x:.9}")).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub class: Class,
    pub rule: Rule,
    pub witness: Option<Witness>,
    /// Sphere minimum behind a numeric verdict.
    pub margin: Option<f64>,
}

impl Verdict {
    pub fn new(class: Class, rule: Rule) -> Self {
        Self {
            class,
            rule,
            witness: None,
            margin: None,
        }
    }

    pub fn with_witness(mut self, witness: Option<Witness>) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn undetermined(rule: Rule) -> Self {
        Self::new(Class::Undetermined, rule)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.class, self.rule)
    }
}
