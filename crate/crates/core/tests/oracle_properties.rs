//! Oracle invariants and agreement with the analytic families.

use num::traits::Signed;
use proptest::prelude::*;
use quartic_core::cyclic::{classify_relaxed, RelaxedCyclicTernary};
use quartic_core::inequality::{builtin_catalog, exact_spot_check, verify, Expectation, WeightedInequality};
use quartic_core::oracle::{certify_negative, classify_numeric, sphere_minimize, OracleConfig};
use quartic_core::scalar::{int, ratio, Rational};
use quartic_core::tensor::ExactTensor;
use quartic_core::verdict::{Class, Witness};

fn cfg() -> OracleConfig {
    OracleConfig {
        parallel: false,
        ..OracleConfig::default()
    }
}

fn small() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

fn ternary() -> impl Strategy<Value = ExactTensor> {
    proptest::collection::vec(small(), 15).prop_map(|v| {
        let idx = quartic_core::tensor::CanonicalIndex::all(3).map(|i| i.as_array());
        ExactTensor::from_entries(3, idx.zip(v)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn homogeneity_of_the_minimum(t in ternary(), c in (1i64..=9, 1i64..=9)) {
        let c = ratio(c.0, c.1);
        let a = sphere_minimize(&t, &cfg()).unwrap().min_value;
        let b = sphere_minimize(&t.scale(&c), &cfg()).unwrap().min_value;
        let cf = quartic_core::scalar::to_f64(&c);
        prop_assert!((b - cf * a).abs() <= 1e-9 * (cf * a).abs().max(1e-12), "{} vs {}", b, cf * a);
    }

    #[test]
    fn indefinite_witnesses_are_exactly_negative(t in ternary()) {
        let v = classify_numeric(&t, &cfg()).unwrap();
        if v.class == Class::Indefinite {
            let Some(Witness::Exact(w)) = &v.witness else { panic!("missing witness") };
            prop_assert!(t.evaluate_form(w).unwrap().is_negative());
        }
    }

    #[test]
    fn relaxed_pd_rules_agree_with_oracle(e in proptest::collection::vec(0i64..=1000, 3), upper in any::<bool>()) {
        // Map each draw into one half of the split.
        let (lo, hi) = if upper { (ratio(-5, 18), ratio(-1, 6)) } else { (ratio(-7, 12), ratio(-5, 18)) };
        let pick = |k: i64| &lo + (&hi - &lo) * ratio(k.max(1), 1000);
        let rt = RelaxedCyclicTernary::from_values([int(1), int(-1), int(1), int(1), pick(e[0]), pick(e[1]), pick(e[2])]);
        let v = classify_relaxed(&rt).unwrap();
        prop_assert_eq!(v.class, Class::PositiveDefinite);
        prop_assert!(sphere_minimize(&rt.embed(), &cfg()).unwrap().min_value > 1e-8);
    }

    #[test]
    fn monotone_in_uniform_weight(x in proptest::collection::vec(small(), 3)) {
        let p = [x[0].clone(), x[1].clone(), x[2].clone()];
        let region = &p[0] * &p[1] * &p[2] * (&p[0] + &p[1] + &p[2]);
        prop_assume!(region.is_positive());
        let hi = WeightedInequality::uniform(int(19), false);
        let lo = WeightedInequality::uniform(int(14), true);
        prop_assert!(exact_spot_check(&hi, &p) <= exact_spot_check(&lo, &p));
    }
}

#[test]
fn exchanged_strict_inequalities_hold() {
    for ineq in builtin_catalog() {
        if !ineq.strict || ineq.expectation != Expectation::Holds {
            continue;
        }
        let rep = verify(&ineq.exchanged(), &OracleConfig::default()).unwrap();
        assert!(rep.holds, "{}: min {}", rep.label, rep.sphere_min);
    }
}

#[test]
fn expected_failures_certify_exactly() {
    for ineq in builtin_catalog() {
        if let Expectation::Fails { point } = &ineq.expectation {
            assert!(exact_spot_check(&ineq, point).is_negative(), "{}", ineq.label);
            let res = sphere_minimize(&ineq.to_tensor(), &OracleConfig::default()).unwrap();
            assert!(res.min_value < -1e-8);
            assert!(certify_negative(&ineq.to_tensor(), &res.minimizer).is_some());
        }
    }
}

#[test]
fn uniform_19_equality_points() {
    let rep = verify(&builtin_catalog()[0], &OracleConfig::default()).unwrap();
    assert_eq!(rep.label, "19u");
    let s = 1.0 / 3f64.sqrt();
    assert_eq!(rep.equality_points.len(), 2);
    for (p, sign) in rep.equality_points.iter().zip([1.0, -1.0]) {
        assert!(p.iter().all(|v| (v - sign * s).abs() <= 1e-4), "{p:?}");
    }
}

#[test]
fn seeds_change_jitter_not_answers() {
    let t = builtin_catalog()[1].to_tensor();
    let a = sphere_minimize(&t, &OracleConfig { seed: 1, ..cfg() }).unwrap();
    let b = sphere_minimize(&t, &OracleConfig { seed: 2, ..cfg() }).unwrap();
    assert!((a.min_value - b.min_value).abs() < 1e-12);
    assert_eq!(sphere_minimize(&t, &OracleConfig { seed: 1, ..cfg() }).unwrap(), a);
}
