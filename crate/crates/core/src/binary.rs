//! Exact decision procedure for 4th-order 2-dimensional symmetric tensors.
//!
//! The form is `a0 x1^4 + 4 a1 x1^3 x2 + 6 a2 x1^2 x2^2 + 4 a3 x1 x2^3 + a4 x2^4`
//! with `a0 = t1111, a1 = t1112, a2 = t1122, a3 = t1222, a4 = t2222`.
//!
//! When both diagonal entries are positive the decision uses the discriminant
//! invariants `eta`, `chi` and a handful of comparisons between rationals and
//! (nested) square roots. Every comparison is decided exactly by splitting on
//! signs and squaring; no square root is ever evaluated. Zero or negative
//! diagonals are handled separately by [`prefilter_zero_diagonal`] and a
//! direct analysis of the residual quadratic.

use num::traits::Signed;
use num::Zero;

use crate::error::{Error, Result};
use crate::scalar::{int, primitive, rationalize, sign, sign_of_radical_difference, sign_of_surd, to_f64, Rational};
use crate::tensor::ExactTensor;
use crate::verdict::{Class, Prefilter, Rule, Verdict, Witness};

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryQuartic {
    pub a0: Rational,
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
    pub a4: Rational,
}

impl BinaryQuartic {
    pub fn new(a0: Rational, a1: Rational, a2: Rational, a3: Rational, a4: Rational) -> Self {
        Self { a0, a1, a2, a3, a4 }
    }

    pub fn from_coefficients(c: [Rational; 5]) -> Self {
        let [a0, a1, a2, a3, a4] = c;
        Self { a0, a1, a2, a3, a4 }
    }

    pub fn coefficients(&self) -> [&Rational; 5] {
        [&self.a0, &self.a1, &self.a2, &self.a3, &self.a4]
    }

    pub fn from_tensor(t: &ExactTensor) -> Result<Self> {
        if t.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: t.dim(),
            });
        }
        Ok(Self::new(
            t.entry([0, 0, 0, 0]),
            t.entry([0, 0, 0, 1]),
            t.entry([0, 0, 1, 1]),
            t.entry([0, 1, 1, 1]),
            t.entry([1, 1, 1, 1]),
        ))
    }

    pub fn to_tensor(&self) -> ExactTensor {
        ExactTensor::from_entries(
            2,
            [
                ([0, 0, 0, 0], self.a0.clone()),
                ([0, 0, 0, 1], self.a1.clone()),
                ([0, 0, 1, 1], self.a2.clone()),
                ([0, 1, 1, 1], self.a3.clone()),
                ([1, 1, 1, 1], self.a4.clone()),
            ],
        )
        .expect("dimension 2")
    }

    /// The quartic with `x1` and `x2` exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(
            self.a4.clone(),
            self.a3.clone(),
            self.a2.clone(),
            self.a1.clone(),
            self.a0.clone(),
        )
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self::new(
            &self.a0 * c,
            &self.a1 * c,
            &self.a2 * c,
            &self.a3 * c,
            &self.a4 * c,
        )
    }

    pub fn evaluate(&self, x1: &Rational, x2: &Rational) -> Rational {
        let x1sq = x1 * x1;
        let x2sq = x2 * x2;
        &self.a0 * &x1sq * &x1sq
            + int(4) * &self.a1 * &x1sq * x1 * x2
            + int(6) * &self.a2 * &x1sq * &x2sq
            + int(4) * &self.a3 * x1 * &x2sq * x2
            + &self.a4 * &x2sq * &x2sq
    }

    fn evaluate_f64(&self, x1: f64, x2: f64) -> f64 {
        let [a0, a1, a2, a3, a4] = self.coefficients().map(to_f64);
        a0 * x1.powi(4) + 4.0 * a1 * x1.powi(3) * x2 + 6.0 * a2 * x1 * x1 * x2 * x2 + 4.0 * a3 * x1 * x2.powi(3) + a4 * x2.powi(4)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantParts {
    pub eta: Rational,
    pub chi: Rational,
    /// Sign of `eta^3 - 27 chi^2`, which is the sign of the discriminant.
    pub delta_sign: i8,
}

pub fn discriminant_parts(q: &BinaryQuartic) -> DiscriminantParts {
    let BinaryQuartic { a0, a1, a2, a3, a4 } = q;
    let eta = a0 * a4 - int(4) * a1 * a3 + int(3) * a2 * a2;
    let chi = a0 * a2 * a4 + int(2) * a1 * a2 * a3 - a2 * a2 * a2 - a0 * a3 * a3 - a1 * a1 * a4;
    let delta = &eta * &eta * &eta - int(27) * &chi * &chi;
    DiscriminantParts {
        eta,
        chi,
        delta_sign: sign(&delta),
    }
}

fn check_radicand(radicand: &Rational) -> Result<()> {
    if radicand.is_negative() {
        Err(Error::NegativeRadicand)
    } else {
        Ok(())
    }
}

/// `lhs <= coeff * sqrt(radicand)`, decided exactly.
pub fn sqrt_leq(lhs: &Rational, coeff: &Rational, radicand: &Rational) -> Result<bool> {
    check_radicand(radicand)?;
    Ok(sign_of_surd(&-lhs, coeff, radicand) >= 0)
}

/// `lhs < coeff * sqrt(radicand)`, decided exactly.
pub fn sqrt_lt(lhs: &Rational, coeff: &Rational, radicand: &Rational) -> Result<bool> {
    check_radicand(radicand)?;
    Ok(sign_of_surd(&-lhs, coeff, radicand) > 0)
}

/// `lhs == coeff * sqrt(radicand)`, decided exactly.
pub fn sqrt_eq(lhs: &Rational, coeff: &Rational, radicand: &Rational) -> Result<bool> {
    check_radicand(radicand)?;
    Ok(sign_of_surd(&-lhs, coeff, radicand) == 0)
}

/// Necessary conditions on the diagonal: `t_iiii >= 0`, and a zero diagonal
/// entry forces the adjacent off-diagonal to vanish and the middle entry to be
/// nonnegative.
pub fn prefilter_zero_diagonal(q: &BinaryQuartic) -> Prefilter {
    let BinaryQuartic { a0, a1, a2, a3, a4 } = q;
    if a0.is_negative() {
        return Prefilter::FailNecessary("t1111 < 0".into());
    }
    if a4.is_negative() {
        return Prefilter::FailNecessary("t2222 < 0".into());
    }
    if a0.is_zero() && !a1.is_zero() {
        return Prefilter::FailNecessary("t1111 = 0 but t1112 != 0".into());
    }
    if a4.is_zero() && !a3.is_zero() {
        return Prefilter::FailNecessary("t2222 = 0 but t1222 != 0".into());
    }
    if (a0.is_zero() || a4.is_zero()) && a2.is_negative() {
        return Prefilter::FailNecessary("zero diagonal but t1122 < 0".into());
    }
    Prefilter::Pass
}

/// The radical conditions, evaluated for `a0 > 0`, `a4 > 0`.
struct RadicalTests {
    delta_sign: i8,
    /// `|a1 √a4 − a3 √a0| <= sqrt(6 a0 a2 a4 + 2 (a0 a4)^{3/2})`
    difference_bound: bool,
    /// `−√s < 3 a2 <= 3√s` with `s = a0 a4`
    middle_strict: bool,
    /// `−√s <= 3 a2 <= 3√s`
    middle_closed: bool,
    /// `a2 > √s` and `|a1 √a4 + a3 √a0| <= sqrt(6 a0 a2 a4 − 2 s^{3/2})`
    large_middle: bool,
    /// The vanishing-discriminant branch for definiteness.
    double_root: bool,
}

fn radical_tests(q: &BinaryQuartic) -> RadicalTests {
    let BinaryQuartic { a0, a1, a2, a3, a4 } = q;
    debug_assert!(a0.is_positive() && a4.is_positive());
    let parts = discriminant_parts(q);
    let s = a0 * a4;
    let six_s_a2 = int(6) * &s * a2;
    let squares = a1 * a1 * a4 + a3 * a3 * a0;

    // Outer radicand 6 s a2 + 2 s √s must be nonnegative before squaring.
    let plus_radicand_ok = sign_of_surd(&six_s_a2, &(int(2) * &s), &s) >= 0;
    let difference_bound = plus_radicand_ok && sign_of_surd(&(&squares - &six_s_a2), &(int(-2) * a1 * a3 - int(2) * &s), &s) <= 0;

    let lower_strict = sign_of_surd(&(int(3) * a2), &int(1), &s) > 0;
    let lower_closed = sign_of_surd(&(int(3) * a2), &int(1), &s) >= 0;
    let upper = sign_of_surd(a2, &int(-1), &s) <= 0;

    let above = sign_of_surd(a2, &int(-1), &s) > 0;
    let minus_radicand_ok = sign_of_surd(&six_s_a2, &(int(-2) * &s), &s) >= 0;
    let large_middle = above && minus_radicand_ok && sign_of_surd(&(&squares - &six_s_a2), &(int(2) * a1 * a3 + int(2) * &s), &s) <= 0;

    let double_root = parts.delta_sign == 0
        && sign_of_radical_difference(a1, a4, a3, a0) == 0
        && sign_of_surd(&(int(2) * a1 * a1 - int(3) * a0 * a2), a0, &s) == 0
        && sign_of_surd(&(int(3) * a0 * a2), &(int(-3) * a0), &s) < 0;

    RadicalTests {
        delta_sign: parts.delta_sign,
        difference_bound,
        middle_strict: lower_strict && upper,
        middle_closed: lower_closed && upper,
        large_middle,
        double_root,
    }
}

fn pd_rule(t: &RadicalTests) -> Option<Rule> {
    if t.double_root {
        return Some(Rule::BinaryDoubleRoot);
    }
    if t.delta_sign > 0 && t.difference_bound {
        if t.middle_strict {
            return Some(Rule::BinaryMiddleRange);
        }
        if t.large_middle {
            return Some(Rule::BinaryLargeMiddle);
        }
    }
    None
}

fn psd_rule(t: &RadicalTests) -> Option<Rule> {
    if t.delta_sign >= 0 && t.difference_bound {
        if t.middle_closed {
            return Some(Rule::BinaryMiddleRange);
        }
        if t.large_middle {
            return Some(Rule::BinaryLargeMiddle);
        }
    }
    None
}

/// Full classification (PD / PSD-not-PD / indefinite) for a quartic with a
/// zero or negative diagonal entry.
fn classify_degenerate(q: &BinaryQuartic) -> Verdict {
    if let Prefilter::FailNecessary(reason) = prefilter_zero_diagonal(q) {
        return Verdict::new(Class::Indefinite, Rule::Prefilter(reason)).with_witness(negative_witness(q));
    }
    let BinaryQuartic { a0, a1, a2, a3, a4 } = q;
    // Passing the prefilter with a zero diagonal leaves x2^2 (6 a2 x1^2 + 4 a3 x1 x2 + a4 x2^2)
    // (when a0 = 0) or its mirror image (when a4 = 0). Either way the form
    // vanishes on a coordinate axis, so it is at best semidefinite.
    let (outer, mid, inner) = if a0.is_zero() {
        debug_assert!(a1.is_zero());
        (int(6) * a2, int(4) * a3, a4.clone())
    } else {
        debug_assert!(a4.is_zero() && a3.is_zero());
        (int(6) * a2, int(4) * a1, a0.clone())
    };
    // outer·u^2 + mid·u·v + inner·v^2 is PSD iff outer, inner >= 0 and mid^2 <= 4·outer·inner.
    let psd = !outer.is_negative() && !inner.is_negative() && &mid * &mid <= int(4) * &outer * &inner;
    let rule = Rule::BinaryZeroDiagonal;
    if psd {
        let zero = if a0.is_zero() {
            vec![int(1), int(0)]
        } else {
            vec![int(0), int(1)]
        };
        Verdict::new(Class::PositiveSemidefiniteNotDefinite, rule).with_witness(Some(Witness::Exact(zero)))
    } else {
        Verdict::new(Class::Indefinite, rule).with_witness(negative_witness(q))
    }
}

/// Positive definiteness. Returns `PositiveDefinite` when the criterion
/// holds; otherwise the finer answer `PositiveSemidefiniteNotDefinite` or
/// `Indefinite`.
pub fn is_positive_definite(q: &BinaryQuartic) -> Verdict {
    if !(q.a0.is_positive() && q.a4.is_positive()) {
        return classify_degenerate(q);
    }
    let tests = radical_tests(q);
    if let Some(rule) = pd_rule(&tests) {
        return Verdict::new(Class::PositiveDefinite, rule);
    }
    match psd_rule(&tests) {
        Some(rule) => Verdict::new(Class::PositiveSemidefiniteNotDefinite, rule).with_witness(zero_witness(q)),
        None => Verdict::new(Class::Indefinite, Rule::BinaryCriterionFailed).with_witness(negative_witness(q)),
    }
}

/// Positive semidefiniteness only; a passing quartic is reported as
/// `PositiveSemidefinite` without examining strictness.
pub fn is_positive_semidefinite(q: &BinaryQuartic) -> Verdict {
    if !(q.a0.is_positive() && q.a4.is_positive()) {
        let v = classify_degenerate(q);
        return if v.class.is_psd() {
            Verdict::new(Class::PositiveSemidefinite, v.rule)
        } else {
            v
        };
    }
    match psd_rule(&radical_tests(q)) {
        Some(rule) => Verdict::new(Class::PositiveSemidefinite, rule),
        None => Verdict::new(Class::Indefinite, Rule::BinaryCriterionFailed).with_witness(negative_witness(q)),
    }
}

/// Complete classification of a binary quartic.
pub fn classify(q: &BinaryQuartic) -> Verdict {
    is_positive_definite(q)
}

/// The two sides `27 (a3 − a1)^4` and `64 (1 − a1 a3)^3` of the closed-form
/// test for `a0 = a2 = a4 = 1`.
pub fn unit_middle_sides(q: &BinaryQuartic) -> (Rational, Rational) {
    let d = &q.a3 - &q.a1;
    let d2 = &d * &d;
    let lhs = int(27) * &d2 * &d2;
    let m = int(1) - &q.a1 * &q.a3;
    let rhs = int(64) * &m * &m * &m;
    (lhs, rhs)
}

/// Closed-form verdict for normalized quartics: `a0 = a4 = 1` with either
/// `a2 = 1, |a1|, |a3| <= 1`, or all entries of modulus one.
pub fn check_normalized_pm1(q: &BinaryQuartic) -> Result<Verdict> {
    let one = int(1);
    if q.a0 != one || q.a4 != one {
        return Err(Error::Precondition("fast path needs t1111 = t2222 = 1".into()));
    }
    let unit = |r: &Rational| r.abs() == one;
    let bounded = |r: &Rational| r.abs() <= one;
    if q.a2 == one && bounded(&q.a1) && bounded(&q.a3) {
        let (lhs, rhs) = unit_middle_sides(q);
        let rule = Rule::FastPathUnitMiddle;
        return Ok(if lhs < rhs {
            Verdict::new(Class::PositiveDefinite, rule)
        } else if lhs == rhs {
            Verdict::new(Class::PositiveSemidefiniteNotDefinite, rule).with_witness(zero_witness(q))
        } else {
            Verdict::new(Class::Indefinite, rule).with_witness(negative_witness(q))
        });
    }
    if unit(&q.a1) && unit(&q.a2) && unit(&q.a3) {
        // Only a2 = -1 is left here, which is never semidefinite.
        return Ok(Verdict::new(Class::Indefinite, Rule::FastPathUnitEntries).with_witness(negative_witness(q)));
    }
    Err(Error::Precondition(
        "fast path needs t1122 = 1 with |t1112|, |t1222| <= 1, or all entries of modulus one".into(),
    ))
}

/// Candidate points on the upper half circle, best float value first.
fn circle_candidates(q: &BinaryQuartic) -> Vec<(f64, f64)> {
    const STEPS: usize = 4096;
    let mut pts: Vec<(f64, (f64, f64))> = (0..STEPS)
        .map(|k| {
            let theta = std::f64::consts::PI * k as f64 / STEPS as f64;
            let p = (theta.cos(), theta.sin());
            (q.evaluate_f64(p.0, p.1), p)
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = pts.iter().take(8).map(|p| p.1).collect();
    // Golden-section polish around the best grid angle.
    if let Some(&(_, (c, s))) = pts.first() {
        let center = s.atan2(c);
        let h = std::f64::consts::PI / STEPS as f64;
        let f = |t: f64| q.evaluate_f64(t.cos(), t.sin());
        let (mut lo, mut hi) = (center - h, center + h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let m1 = hi - g * (hi - lo);
            let m2 = lo + g * (hi - lo);
            if f(m1) < f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let t = 0.5 * (lo + hi);
        out.insert(0, (t.cos(), t.sin()));
    }
    out
}

fn rational_probes(q: &BinaryQuartic) -> impl Iterator<Item = (Rational, Rational)> + '_ {
    let axes = [(int(1), int(0)), (int(0), int(1))];
    let cands = circle_candidates(q);
    let rounded = cands
        .into_iter()
        .flat_map(|(c, s)| [1_000_000i64, 1_000_000_000_000].map(move |d| (rationalize(c, d), rationalize(s, d))));
    axes.into_iter().chain(rounded)
}

/// A rational point where the form is negative, if one is found.
pub fn negative_witness(q: &BinaryQuartic) -> Option<Witness> {
    rational_probes(q)
        .find(|(x1, x2)| q.evaluate(x1, x2).is_negative())
        .map(|(x1, x2)| Witness::Exact(primitive(&[x1, x2])))
}

/// A nonzero rational point where the form vanishes, if one is found.
pub fn zero_witness(q: &BinaryQuartic) -> Option<Witness> {
    rational_probes(q)
        .find(|(x1, x2)| !(x1.is_zero() && x2.is_zero()) && q.evaluate(x1, x2).is_zero())
        .map(|(x1, x2)| Witness::Exact(primitive(&[x1, x2])))
}
