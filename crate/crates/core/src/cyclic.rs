//! Cyclic symmetric 4th-order 3-dimensional tensors.
//!
//! A cyclic symmetric tensor is constant on the five orbits of the rotation
//! `1 -> 2 -> 3 -> 1`:
//!
//! | field | slots                   |
//! |-------|-------------------------|
//! | `a`   | t1111 t2222 t3333       |
//! | `b`   | t1112 t2223 t1333       |
//! | `c`   | t1113 t1222 t2333       |
//! | `d`   | t1122 t1133 t2233       |
//! | `e`   | t1123 t1223 t1233       |
//!
//! The classifiers here only answer for the normalized family
//! `a = 1, |b| = |c| = 1`; anything else is sent to the numeric oracle.

use num::traits::Signed;

use crate::error::{Error, Result};
use crate::scalar::{int, ratio, Rational};
use crate::tensor::ExactTensor;
use crate::verdict::{Class, Prefilter, Rule, Verdict, Witness};

const A_SLOTS: [[usize; 4]; 3] = [[0, 0, 0, 0], [1, 1, 1, 1], [2, 2, 2, 2]];
const B_SLOTS: [[usize; 4]; 3] = [[0, 0, 0, 1], [1, 1, 1, 2], [0, 2, 2, 2]];
const C_SLOTS: [[usize; 4]; 3] = [[0, 0, 0, 2], [0, 1, 1, 1], [1, 2, 2, 2]];
const D_SLOTS: [[usize; 4]; 3] = [[0, 0, 1, 1], [0, 0, 2, 2], [1, 1, 2, 2]];
const E123: [usize; 4] = [0, 0, 1, 2];
const E223: [usize; 4] = [0, 1, 1, 2];
const E233: [usize; 4] = [0, 1, 2, 2];

#[derive(Debug, Clone, PartialEq)]
pub struct CyclicTernary {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub e: Rational,
}

/// Cyclic pattern on the a/b/c/d orbits with three independent `e` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedCyclicTernary {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub e123: Rational,
    pub e223: Rational,
    pub e233: Rational,
}

pub type FamilyVerdict = Verdict;

fn orbit(t: &ExactTensor, slots: &[[usize; 4]]) -> Option<Rational> {
    let first = t.entry(slots[0]);
    slots[1..].iter().all(|s| t.entry(*s) == first).then_some(first)
}

impl CyclicTernary {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational, e: Rational) -> Self {
        Self { a, b, c, d, e }
    }

    pub fn from_values(v: [Rational; 5]) -> Self {
        let [a, b, c, d, e] = v;
        Self { a, b, c, d, e }
    }

    pub fn relaxed(&self) -> RelaxedCyclicTernary {
        RelaxedCyclicTernary {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
            e123: self.e.clone(),
            e223: self.e.clone(),
            e233: self.e.clone(),
        }
    }

    pub fn embed(&self) -> ExactTensor {
        self.relaxed().embed()
    }

    /// Recognize the cyclic pattern in a 3-dimensional tensor.
    pub fn from_tensor(t: &ExactTensor) -> Option<Self> {
        let r = RelaxedCyclicTernary::from_tensor(t)?;
        (r.e123 == r.e223 && r.e223 == r.e233).then(|| Self::new(r.a, r.b, r.c, r.d, r.e123))
    }

    /// Divide every entry by `a`.
    pub fn normalized(&self) -> Result<Self> {
        if !self.a.is_positive() {
            return Err(Error::Precondition("rescaling needs t1111 > 0".into()));
        }
        let s = |v: &Rational| v / &self.a;
        Ok(Self::new(int(1), s(&self.b), s(&self.c), s(&self.d), s(&self.e)))
    }
}

impl RelaxedCyclicTernary {
    pub fn from_values(v: [Rational; 7]) -> Self {
        let [a, b, c, d, e123, e223, e233] = v;
        Self {
            a,
            b,
            c,
            d,
            e123,
            e223,
            e233,
        }
    }

    pub fn embed(&self) -> ExactTensor {
        let mut entries = Vec::with_capacity(15);
        for (slots, v) in [
            (A_SLOTS, &self.a),
            (B_SLOTS, &self.b),
            (C_SLOTS, &self.c),
            (D_SLOTS, &self.d),
        ] {
            entries.extend(slots.iter().map(|s| (*s, v.clone())));
        }
        entries.push((E123, self.e123.clone()));
        entries.push((E223, self.e223.clone()));
        entries.push((E233, self.e233.clone()));
        ExactTensor::from_entries(3, entries).expect("dimension 3")
    }

    pub fn from_tensor(t: &ExactTensor) -> Option<Self> {
        if t.dim() != 3 {
            return None;
        }
        Some(Self {
            a: orbit(t, &A_SLOTS)?,
            b: orbit(t, &B_SLOTS)?,
            c: orbit(t, &C_SLOTS)?,
            d: orbit(t, &D_SLOTS)?,
            e123: t.entry(E123),
            e223: t.entry(E223),
            e233: t.entry(E233),
        })
    }

    pub fn normalized(&self) -> Result<Self> {
        if !self.a.is_positive() {
            return Err(Error::Precondition("rescaling needs t1111 > 0".into()));
        }
        let s = |v: &Rational| v / &self.a;
        Ok(Self {
            a: int(1),
            b: s(&self.b),
            c: s(&self.c),
            d: s(&self.d),
            e123: s(&self.e123),
            e223: s(&self.e223),
            e233: s(&self.e233),
        })
    }

    pub fn e_values(&self) -> [&Rational; 3] {
        [&self.e123, &self.e223, &self.e233]
    }
}

fn lower_bound() -> Rational {
    ratio(-7, 12)
}

fn mismatch(family: &'static str, reason: impl Into<String>) -> Error {
    Error::PatternMismatch {
        family,
        reason: reason.into(),
    }
}

/// `a = 1`, `|b| = |c| = 1`.
fn check_normalized(a: &Rational, b: &Rational, c: &Rational, family: &'static str) -> Result<()> {
    let one = int(1);
    if *a != one {
        return Err(mismatch(family, "t1111 must be 1 (rescale first)"));
    }
    if b.abs() != one || c.abs() != one {
        return Err(mismatch(family, "|t1112| and |t1222| must be 1"));
    }
    Ok(())
}

/// Necessary condition `e >= -7/12` for the pattern
/// `a = d = |b| = |c| = 1, b·c = -1`.
pub fn necessity_bound_check(ct: &CyclicTernary) -> Result<Prefilter> {
    check_normalized(&ct.a, &ct.b, &ct.c, "cyclic necessity bound")?;
    let one = int(1);
    if ct.d != one || &ct.b * &ct.c != -one {
        return Err(mismatch("cyclic necessity bound", "needs t1122 = 1 and t1112·t1222 = -1"));
    }
    Ok(if ct.e < lower_bound() {
        Prefilter::FailNecessary("t1123 < -7/12".into())
    } else {
        Prefilter::Pass
    })
}

fn ones() -> Vec<Rational> {
    vec![int(1), int(1), int(1)]
}

/// Decision ladder for the normalized cyclic family.
pub fn classify_cyclic(ct: &CyclicTernary) -> Result<FamilyVerdict> {
    check_normalized(&ct.a, &ct.b, &ct.c, "cyclic ternary")?;
    let one = int(1);
    let bc = &ct.b * &ct.c;
    let opposite = bc == -one.clone();
    let e = &ct.e;
    let floor = lower_bound();

    if !opposite && ct.d == one && *e == floor {
        // Same-sign orientation at the endpoint has explicit negative points.
        let witness = if ct.b == one {
            vec![int(1), int(1), int(-5)]
        } else {
            ones()
        };
        return Ok(Verdict::new(Class::Indefinite, Rule::CyclicCounterexample).with_witness(Some(Witness::Exact(witness))));
    }
    if opposite && ct.d == one && *e == floor {
        return Ok(Verdict::new(Class::PositiveSemidefiniteNotDefinite, Rule::CyclicBoundary).with_witness(Some(Witness::Exact(ones()))));
    }
    if opposite && ct.d >= one {
        if *e > floor && *e <= ratio(-5, 36) {
            let rule = if ct.d > one {
                Rule::CyclicPdLifted
            } else if *e <= ratio(-1, 6) {
                Rule::CyclicPdInterval
            } else {
                Rule::CyclicPdIntervalWidened
            };
            return Ok(Verdict::new(Class::PositiveDefinite, rule));
        }
        if *e == floor {
            return Ok(Verdict::new(Class::PositiveSemidefinite, Rule::CyclicPsdLifted));
        }
    }
    if opposite && ct.d == one && *e < floor {
        // (1,1,1) evaluates to 21 + 36 e < 0.
        return Ok(Verdict::new(Class::Indefinite, Rule::CyclicNecessityBound).with_witness(Some(Witness::Exact(ones()))));
    }
    Ok(Verdict::undetermined(Rule::NotApplicable))
}

/// Definiteness for the relaxed family with `a = d = 1`, `|b| = |c| = 1`,
/// `b·c = -1`: PD when all three `e` slots sit in `(-7/12, -5/18]`, or all
/// in `[-5/18, -1/6]`. Mixing the two halves is not covered.
pub fn classify_relaxed(rt: &RelaxedCyclicTernary) -> Result<FamilyVerdict> {
    check_normalized(&rt.a, &rt.b, &rt.c, "relaxed cyclic ternary")?;
    let one = int(1);
    if rt.d != one || &rt.b * &rt.c != -one {
        return Err(mismatch("relaxed cyclic ternary", "needs t1122 = 1 and t1112·t1222 = -1"));
    }
    let floor = lower_bound();
    let quarter = ratio(-1, 4);
    let split = ratio(-5, 18);
    let top = ratio(-1, 6);
    let all = |pred: &dyn Fn(&Rational) -> bool| rt.e_values().into_iter().all(pred);

    let rule = if all(&|e| *e > floor && *e <= quarter) {
        Some(Rule::RelaxedLowerInterval)
    } else if all(&|e| *e >= quarter && *e <= top) {
        Some(Rule::RelaxedUpperInterval)
    } else if all(&|e| *e > floor && *e <= split) {
        Some(Rule::RelaxedLowerIntervalWidened)
    } else if all(&|e| *e >= split && *e <= top) {
        Some(Rule::RelaxedUpperIntervalWidened)
    } else {
        None
    };
    Ok(match rule {
        Some(rule) => Verdict::new(Class::PositiveDefinite, rule),
        None => Verdict::undetermined(Rule::NotApplicable),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::CanonicalIndex;

    fn ct(b: i64, c: i64, d: i64, e: (i64, i64)) -> CyclicTernary {
        CyclicTernary::new(int(1), int(b), int(c), int(d), ratio(e.0, e.1))
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn embed_examples() {
        let t = ct(0, 0, 0, (0, 1)).embed();
        assert_eq!(t, ExactTensor::diagonal_ones(3).unwrap());

        let t = ct(-1, 1, 1, (-7, 12)).embed();
        assert_eq!(t.evaluate_form(&v(&[1, 1, 1])).unwrap(), int(0));

        let t = ct(1, 1, 1, (-7, 12)).embed();
        assert_eq!(t.evaluate_form(&v(&[1, 1, -5])).unwrap(), int(-204));

        let t = ct(-1, -1, 1, (-7, 12)).embed();
        assert_eq!(t.evaluate_form(&v(&[1, 1, 1])).unwrap(), int(-24));
    }

    #[test]
    fn embed_fills_all_fifteen_slots() {
        let t = CyclicTernary::new(int(2), int(3), int(5), int(7), int(11)).embed();
        assert_eq!(t.nonzero_entries().count(), 15);
        assert_eq!(CyclicTernary::from_tensor(&t), Some(CyclicTernary::new(int(2), int(3), int(5), int(7), int(11))));
        let mut broken = t.clone();
        broken.set(CanonicalIndex::new([1, 1, 1, 2]), int(0));
        assert_eq!(CyclicTernary::from_tensor(&broken), None);
    }

    #[test]
    fn relaxed_round_trip() {
        let r = RelaxedCyclicTernary::from_values([int(1), int(-1), int(1), int(1), ratio(-1, 2), ratio(-1, 3), ratio(-1, 4)]);
        let t = r.embed();
        assert_eq!(RelaxedCyclicTernary::from_tensor(&t), Some(r));
        assert_eq!(CyclicTernary::from_tensor(&t), None);
    }

    #[test]
    fn necessity_bound() {
        assert_eq!(necessity_bound_check(&ct(-1, 1, 1, (-7, 12))).unwrap(), Prefilter::Pass);
        assert!(matches!(necessity_bound_check(&ct(-1, 1, 1, (-1, 1))).unwrap(), Prefilter::FailNecessary(_)));
        assert_eq!(necessity_bound_check(&ct(1, -1, 1, (0, 1))).unwrap(), Prefilter::Pass);
        assert!(matches!(
            necessity_bound_check(&ct(1, 1, 1, (0, 1))),
            Err(Error::PatternMismatch { .. })
        ));
        assert!(necessity_bound_check(&ct(-1, 1, 2, (0, 1))).is_err());
    }

    #[test]
    fn ladder_examples() {
        let v1 = classify_cyclic(&ct(-1, 1, 1, (-7, 12))).unwrap();
        assert_eq!(v1.class, Class::PositiveSemidefiniteNotDefinite);
        assert_eq!(v1.witness, Some(Witness::Exact(v(&[1, 1, 1]))));

        let v2 = classify_cyclic(&ct(-1, 1, 1, (-1, 6))).unwrap();
        assert_eq!((v2.class, v2.rule), (Class::PositiveDefinite, Rule::CyclicPdInterval));

        let v3 = classify_cyclic(&ct(1, 1, 1, (-7, 12))).unwrap();
        assert_eq!(v3.class, Class::Indefinite);
        assert_eq!(v3.witness, Some(Witness::Exact(v(&[1, 1, -5]))));

        let v4 = classify_cyclic(&ct(-1, -1, 1, (-7, 12))).unwrap();
        assert_eq!(v4.witness, Some(Witness::Exact(v(&[1, 1, 1]))));
    }

    #[test]
    fn ladder_rules() {
        let rule = |b, c, d, e| classify_cyclic(&ct(b, c, d, e)).unwrap();
        assert_eq!(rule(-1, 1, 1, (-5, 36)).rule, Rule::CyclicPdIntervalWidened);
        assert_eq!(rule(1, -1, 1, (-1, 7)).rule, Rule::CyclicPdIntervalWidened);
        assert_eq!(rule(-1, 1, 2, (-1, 3)).rule, Rule::CyclicPdLifted);
        let v = rule(-1, 1, 3, (-7, 12));
        assert_eq!((v.class, v.rule), (Class::PositiveSemidefinite, Rule::CyclicPsdLifted));
        let v = rule(-1, 1, 1, (-2, 3));
        assert_eq!((v.class, v.rule), (Class::Indefinite, Rule::CyclicNecessityBound));
        assert_eq!(rule(-1, 1, 1, (-1, 10)).class, Class::Undetermined);
        assert_eq!(rule(-1, 1, 1, (-5, 36)).class, Class::PositiveDefinite);
        assert_eq!(rule(1, 1, 1, (-1, 6)).class, Class::Undetermined);
        assert_eq!(rule(-1, 1, 0, (-1, 6)).class, Class::Undetermined);
        assert!(classify_cyclic(&CyclicTernary::new(int(2), int(1), int(1), int(1), int(0))).is_err());
        assert!(classify_cyclic(&ct(0, 1, 1, (0, 1))).is_err());
    }

    #[test]
    fn witnesses_are_sound() {
        for c in [ct(1, 1, 1, (-7, 12)), ct(-1, -1, 1, (-7, 12)), ct(-1, 1, 1, (-3, 4)), ct(1, -1, 1, (-1, 1))] {
            let v = classify_cyclic(&c).unwrap();
            assert_eq!(v.class, Class::Indefinite);
            let Some(Witness::Exact(w)) = v.witness else { panic!() };
            assert!(c.embed().evaluate_form(&w).unwrap() < int(0));
        }
        for c in [ct(-1, 1, 1, (-7, 12)), ct(1, -1, 1, (-7, 12))] {
            let v = classify_cyclic(&c).unwrap();
            let Some(Witness::Exact(w)) = v.witness else { panic!() };
            assert_eq!(c.embed().evaluate_form(&w).unwrap(), int(0));
        }
    }

    #[test]
    fn relaxed_examples() {
        let r = |e: [(i64, i64); 3]| {
            let [x, y, z] = e.map(|(n, d)| ratio(n, d));
            classify_relaxed(&RelaxedCyclicTernary::from_values([int(1), int(-1), int(1), int(1), x, y, z])).unwrap()
        };
        let v = r([(-1, 4); 3]);
        assert_eq!((v.class, v.rule), (Class::PositiveDefinite, Rule::RelaxedLowerInterval));
        // (-7/12, -5/18] sits inside (-7/12, -1/4], so the original rule reports.
        let v = r([(-1, 2), (-1, 3), (-1, 3)]);
        assert_eq!((v.class, v.rule), (Class::PositiveDefinite, Rule::RelaxedLowerInterval));
        let v = r([(-13, 24), (-1, 6), (-1, 6)]);
        assert_eq!(v.class, Class::Undetermined);
        let v = r([(-1, 5), (-1, 6), (-2, 9)]);
        assert_eq!((v.class, v.rule), (Class::PositiveDefinite, Rule::RelaxedUpperInterval));
        let v = r([(-5, 18), (-1, 6), (-2, 9)]);
        assert_eq!((v.class, v.rule), (Class::PositiveDefinite, Rule::RelaxedUpperIntervalWidened));
        assert_eq!(r([(-7, 12), (-1, 3), (-1, 3)]).class, Class::Undetermined);
        let bad = RelaxedCyclicTernary::from_values([int(1), int(1), int(1), int(1), int(0), int(0), int(0)]);
        assert!(classify_relaxed(&bad).is_err());
    }

    #[test]
    fn normalization() {
        let c = CyclicTernary::new(int(2), int(-2), int(2), int(2), ratio(-1, 3));
        assert_eq!(c.normalized().unwrap(), ct(-1, 1, 1, (-1, 6)));
        assert!(CyclicTernary::new(int(0), int(1), int(1), int(1), int(0)).normalized().is_err());
    }
}
