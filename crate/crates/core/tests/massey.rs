mod common;

use std::collections::BTreeMap;

use common::{form, hodge, perturbation_invariant};
use hermform_core::algebra::Form;
use hermform_core::catalog;
use hermform_core::hodge::{Degree, Hodge, Theory};
use hermform_core::linalg::Scalar;
use hermform_core::massey::{
    self, appendix_suite, potential_freedom, solve_potential, triple_abc_massey, triple_abc_massey_with,
    verify_appendix_case, MasseyError,
};

#[test]
fn iwasawa_product() {
    let h = hodge("iwasawa");
    let m = h.model();
    let (a, b, c) = (form(m, "p1*p2"), form(m, "q1*q2"), form(m, "q1*q2"));
    let v = triple_abc_massey(&h, &a, &b, &c).unwrap();
    assert!(v.nonzero);
    assert_eq!(v.degree, (1, 3));
    // the potentials solve their equations
    assert_eq!(m.ddbar(&v.f_ab).unwrap(), m.wedge(&a, &b).unwrap());
    assert!(v.harmonic.ratio_to(&form(m, "p3*q1*q2*q3")).is_some());
    assert!(h.is_harmonic(Theory::Aeppli, Degree::Bi(1, 3), &v.harmonic).unwrap());
}

#[test]
fn appendix_reports() {
    let runs = appendix_suite();
    assert_eq!(runs.len(), catalog::nakamura_cases().len() + 1);
    for (case, params) in runs {
        let r = verify_appendix_case(&case, &params).unwrap();
        assert!(r.verified, "{case} {params:?}");
        assert!(!r.scalar.unwrap().is_zero());
        assert_eq!(r.listed_bidegree_mismatch.is_some(), case == "V.9", "{case}");
    }
    let v9 = verify_appendix_case("V.9", &BTreeMap::new()).unwrap();
    assert_eq!(v9.listed_bidegree_mismatch, Some((1, 3)));
    assert_eq!(v9.verdict.degree, (1, 2));
}

#[test]
fn potentials_are_checked() {
    let h = hodge("iwasawa");
    let m = h.model();
    let (a, b) = (form(m, "p1*p2"), form(m, "q1*q2"));
    let good = solve_potential(&h, &m.wedge(&a, &b).unwrap()).unwrap();
    // β ∧ γ = 0, so its potential may be taken to be zero
    let zero = Form::zero(m.ngens());
    let wrong = &good + &form(m, "p3*q3");
    assert!(matches!(
        triple_abc_massey_with(&h, &a, &b, &b, wrong, zero.clone()),
        Err(MasseyError::BadPotential { .. })
    ));
    // a potential shifted by a ∂∂̄-closed form is still accepted
    let free = potential_freedom(&h, 1, 1);
    let shifted = &good + &m.from_vec(1, 1, &free.basis()[0]);
    assert!(triple_abc_massey_with(&h, &a, &b, &b, shifted, zero).is_ok());
}

#[test]
fn invalid_inputs() {
    let h = hodge("iwasawa");
    let m = h.model();
    // φ³ is not closed
    let err = triple_abc_massey(&h, &form(m, "p3"), &form(m, "q1"), &form(m, "q1")).unwrap_err();
    assert!(matches!(err, MasseyError::NotHarmonic { which: "α" }), "{err}");
    let err = triple_abc_massey(
        &h,
        &(&form(m, "p1") + &form(m, "q1*q2")),
        &form(m, "q1"),
        &form(m, "q1"),
    )
    .unwrap_err();
    assert!(matches!(err, MasseyError::NotHomogeneous { .. }), "{err}");
    // φ¹ ∧ φ̄¹ is not ∂∂̄-exact on the torus
    let t = hodge("torus:2");
    let tm = t.model();
    let err = triple_abc_massey(&t, &form(tm, "p1"), &form(tm, "q1"), &form(tm, "q2")).unwrap_err();
    assert!(matches!(err, MasseyError::Undefined { .. }), "{err}");
}

#[test]
fn products_vanish_on_the_torus_where_defined() {
    let t = hodge("torus:2");
    let m = t.model();
    // φ¹ ∧ φ¹ = 0, so both potentials are zero and the product is zero
    let p1 = form(m, "p1");
    let v = triple_abc_massey(&t, &p1, &p1, &form(m, "p1*q1")).unwrap();
    assert!(v.representative.is_zero());
    assert!(!v.nonzero);
}

#[test]
fn perturbed_potentials_give_the_same_verdict() {
    for (seed, (case, params)) in appendix_suite().into_iter().enumerate() {
        let row = catalog::appendix_case(&case, &params).unwrap();
        let m = catalog::load(&format!("nakamura:{case}"), &params)
            .unwrap()
            .model()
            .unwrap();
        let h = Hodge::new(m).unwrap();
        let [a, b, c] = row.triple.map(|e| form(h.model(), e));
        perturbation_invariant(&h, [&a, &b, &c], 20, 1000 + seed as u64).unwrap_or_else(|e| panic!("{case}: {e}"));
    }
}

#[test]
fn conjugate_triple_is_also_nonzero() {
    let params: BTreeMap<String, Scalar> = BTreeMap::new();
    for case in ["III.2", "IV.3", "V.2", "V.6", "V.12"] {
        let row = catalog::appendix_case(case, &params).unwrap();
        let h = Hodge::new(
            catalog::load(&format!("nakamura:{case}"), &params)
                .unwrap()
                .model()
                .unwrap(),
        )
        .unwrap();
        let m = h.model();
        let [a, b, c] = row.triple.map(|e| m.conj(&form(m, e)).unwrap());
        let v = triple_abc_massey(&h, &a, &b, &c).unwrap();
        assert!(v.nonzero, "{case}");
    }
}

#[test]
fn library_perturbation_check_agrees() {
    use rand::{Rng, SeedableRng};
    let h = hodge("nakamura:V.6");
    let row = catalog::appendix_case("V.6", &BTreeMap::new()).unwrap();
    let [a, b, c] = row.triple.map(|e| form(h.model(), e));
    let v = triple_abc_massey(&h, &a, &b, &c).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    massey::perturbation_check(&h, [&a, &b, &c], &v, 10, || {
        Scalar::gaussian(rng.gen_range(-5..=5), rng.gen_range(-5..=5))
    })
    .unwrap();
    // a tampered verdict is caught
    let mut forged = v.clone();
    forged.nonzero = !forged.nonzero;
    let err = massey::perturbation_check(&h, [&a, &b, &c], &forged, 1, Scalar::zero).unwrap_err();
    assert!(
        matches!(err, MasseyError::Hodge(hermform_core::HodgeError::Invariant(_))),
        "{err}"
    );
}
