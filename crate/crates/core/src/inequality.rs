//! Weighted ternary quartic inequalities
//!
//! `P(x) = (x1+x2+x3)^4 - 8(x1^3 x2 + x1 x3^3 + x2^3 x3) - x1 x2 x3 (w1 x1 + w2 x2 + w3 x3)`
//!
//! checked numerically through the sphere oracle and exactly at named points.

use std::collections::BTreeMap;
use std::fmt;

use num::traits::{Signed, Zero};

use crate::error::Result;
use crate::exec;
use crate::oracle::{sphere_minimize, zero_set_from_result, OracleConfig};
use crate::scalar::{format_rational, int, ratio, Rational};
use crate::tensor::{CanonicalIndex, ExactTensor};

#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    Holds,
    /// Fails, with a point where `P < 0`.
    Fails { point: [Rational; 3] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedInequality {
    pub label: String,
    pub weights: [Rational; 3],
    /// `P > 0` away from the origin instead of `P >= 0`.
    pub strict: bool,
    /// Use `x1 x2^3 + x1^3 x3 + x2 x3^3` in the cubic term.
    pub exchanged: bool,
    pub expectation: Expectation,
}

/// Exponent vectors of the cubic-linear monomials.
const CUBIC_TERMS: [[usize; 3]; 3] = [[3, 1, 0], [1, 0, 3], [0, 3, 1]];
const CUBIC_TERMS_EXCHANGED: [[usize; 3]; 3] = [[1, 3, 0], [3, 0, 1], [0, 1, 3]];
const WEIGHT_TERMS: [[usize; 3]; 3] = [[2, 1, 1], [1, 2, 1], [1, 1, 2]];

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

impl WeightedInequality {
    pub fn uniform(c: Rational, strict: bool) -> Self {
        Self::weighted([c.clone(), c.clone(), c], strict).labelled_uniform()
    }

    pub fn weighted(weights: [Rational; 3], strict: bool) -> Self {
        let label = weights.iter().map(format_rational).collect::<Vec<_>>().join("-");
        Self {
            label,
            weights,
            strict,
            exchanged: false,
            expectation: Expectation::Holds,
        }
    }

    fn labelled_uniform(mut self) -> Self {
        self.label = format!("{}u", format_rational(&self.weights[0]));
        self
    }

    pub fn expect_failure(mut self, point: [Rational; 3]) -> Self {
        self.expectation = Expectation::Fails { point };
        self
    }

    /// The variant with every cubic-linear monomial reversed.
    pub fn exchanged(&self) -> Self {
        let mut out = self.clone();
        out.exchanged = !self.exchanged;
        out.label = if self.exchanged {
            self.label.trim_end_matches('x').to_string()
        } else {
            format!("{}x", self.label)
        };
        out
    }

    pub fn is_uniform(&self) -> bool {
        self.weights[0] == self.weights[1] && self.weights[1] == self.weights[2]
    }

    /// Coefficients of `P` keyed by exponent vector.
    pub fn monomials(&self) -> BTreeMap<[usize; 3], Rational> {
        let mut m: BTreeMap<[usize; 3], Rational> = BTreeMap::new();
        for i in 0..=4 {
            for j in 0..=4 - i {
                let k = 4 - i - j;
                let multinomial = 24 / (factorial(i) * factorial(j) * factorial(k));
                m.insert([i, j, k], int(multinomial));
            }
        }
        let cubic = if self.exchanged { &CUBIC_TERMS_EXCHANGED } else { &CUBIC_TERMS };
        for e in cubic {
            *m.get_mut(e).expect("degree 4") -= int(8);
        }
        for (e, w) in WEIGHT_TERMS.iter().zip(&self.weights) {
            *m.get_mut(e).expect("degree 4") -= w;
        }
        m.retain(|_, v| !v.is_zero());
        m
    }

    pub fn to_tensor(&self) -> ExactTensor {
        let terms = self
            .monomials()
            .into_iter()
            .map(|(e, c)| (CanonicalIndex::from_exponents(&e), c));
        ExactTensor::from_monomials(3, terms).expect("dimension 3")
    }
}

impl fmt::Display for WeightedInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Exact `P(x)`, expanded from the monomial list.
pub fn exact_spot_check(ineq: &WeightedInequality, x: &[Rational; 3]) -> Rational {
    ineq.monomials()
        .iter()
        .map(|(e, c)| {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    term *= xi;
                }
            }
            term
        })
        .sum()
}

fn point(x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> [Rational; 3] {
    [ratio(x.0, x.1), ratio(y.0, y.1), ratio(z.0, z.1)]
}

fn triple(a: Rational, b: i64, c: i64) -> [Rational; 3] {
    [a, int(b), int(c)]
}

/// Every inequality the harness knows about, labels unique.
pub fn builtin_catalog() -> Vec<WeightedInequality> {
    let mut out = vec![WeightedInequality::uniform(int(19), false)];
    for c in 14..=18 {
        out.push(WeightedInequality::uniform(int(c), true));
    }
    out.push(WeightedInequality::uniform(ratio(41, 3), true));
    for w in [
        triple(int(19), 17, 15),
        triple(int(19), 16, 15),
        triple(int(15), 14, 14),
        triple(int(15), 16, 14),
        triple(int(17), 15, 18),
        triple(ratio(46, 3), 14, 14),
    ] {
        out.push(WeightedInequality::weighted(w, true));
    }
    let near_axis = point((-6, 5), (5, 1), (1, 1));
    for a in [19, 18, 17, 16] {
        out.push(WeightedInequality::weighted(triple(int(a), 14, 14), true).expect_failure(near_axis.clone()));
    }
    out.push(
        WeightedInequality::weighted(triple(ratio(41, 3), 15, 15), true)
            .expect_failure(point((-47, 5), (-2, 1), (23, 10))),
    );
    out
}

pub fn find(label: &str) -> Option<WeightedInequality> {
    builtin_catalog().into_iter().find(|i| i.label == label)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub label: String,
    pub sphere_min: f64,
    pub min_point: Vec<f64>,
    pub equality_points: Vec<Vec<f64>>,
    pub holds: bool,
    /// `P` at the expected-fail point, exact.
    pub spot_value: Option<Rational>,
    /// Outcome matches the catalog expectation (for an expected failure this
    /// also requires the exact spot value to be negative).
    pub as_expected: bool,
}

pub fn verify(ineq: &WeightedInequality, cfg: &OracleConfig) -> Result<InequalityReport> {
    let t = ineq.to_tensor();
    let res = sphere_minimize(&t, cfg)?;
    let zeros = zero_set_from_result(&res, cfg);
    let equality_points = zeros.points;
    let holds = if ineq.strict {
        res.min_value > cfg.classify_margin && equality_points.is_empty()
    } else {
        res.min_value >= -cfg.classify_margin
    };
    let spot_value = match &ineq.expectation {
        Expectation::Fails { point } => Some(exact_spot_check(ineq, point)),
        Expectation::Holds => None,
    };
    let as_expected = match &spot_value {
        None => holds,
        Some(v) => !holds && v.is_negative(),
    };
    Ok(InequalityReport {
        label: ineq.label.clone(),
        sphere_min: res.min_value,
        min_point: res.minimizer,
        equality_points,
        holds,
        spot_value,
        as_expected,
    })
}

/// Verify a list of inequalities, preserving order.
pub fn verify_all(list: &[WeightedInequality], cfg: &OracleConfig) -> Result<Vec<InequalityReport>> {
    let inner = OracleConfig {
        parallel: false,
        ..cfg.clone()
    };
    exec::map_ordered(list, cfg.parallel, |i| verify(i, &inner)).into_iter().collect()
}
