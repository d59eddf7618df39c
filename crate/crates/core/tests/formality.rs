mod common;

use common::{catalog_ids, form, hodge};
use hermform_core::formality::{
    check_all, check_formality, ddbar_p0_report, holomorphic_closedness_obstruction, recheck_witness, Notion,
    Operation, Requirement,
};
use hermform_core::hodge::{Degree, Equation, Theory};

#[test]
fn notion_names() {
    for (text, notion) in [
        ("dolbeault", Notion::Dolbeault),
        ("dbar", Notion::Dolbeault),
        ("bott-chern", Notion::BottChern),
        ("BC", Notion::BottChern),
        ("abc", Notion::Abc),
        ("geom-aeppli", Notion::Aeppli),
        ("de-rham", Notion::DeRham),
        ("riemannian", Notion::DeRham),
    ] {
        assert_eq!(text.parse::<Notion>().unwrap(), notion, "{text}");
    }
    assert!("kahler".parse::<Notion>().is_err());
    assert_eq!(Notion::BottChern.to_string(), "geometrically Bott-Chern formal");
}

#[test]
fn torus_is_formal_in_every_sense() {
    for n in 1..=3 {
        let h = hodge(&format!("torus:{n}"));
        for r in check_all(&h).unwrap() {
            assert!(r.formal, "torus:{n} {}", r.notion);
            assert!(r.witness.is_none());
        }
        assert!(ddbar_p0_report(&h).unwrap().iter().all(|row| row.all()));
        assert!(holomorphic_closedness_obstruction(&h).unwrap().is_none());
    }
}

#[test]
fn iwasawa_verdicts() {
    let h = hodge("iwasawa");
    let m = h.model();
    let reports = check_all(&h).unwrap();
    assert!(reports.iter().all(|r| !r.formal));

    let bc = check_formality(&h, Notion::BottChern).unwrap();
    let w = bc.witness.as_ref().unwrap();
    assert_eq!(w.operation, Operation::Wedge);
    assert_eq!(w.requirement, Requirement::Equation(Equation::DdbarAdjoint));
    let exact = w.exact_part.as_ref().unwrap();
    assert_eq!(m.ddbar(&exact.potential).unwrap(), exact.image);
    assert!(!exact.image.is_zero());

    let holo = holomorphic_closedness_obstruction(&h).unwrap().unwrap();
    assert_eq!(holo.p, 1);
    assert!(holo.form.ratio_to(&form(m, "p3")).is_some());
    assert_eq!(m.del(&holo.form).unwrap(), holo.del);

    let rows = ddbar_p0_report(&h).unwrap();
    assert!(!rows[1].bc_dbar);
}

#[test]
fn witnesses_survive_recheck() {
    for id in [
        "iwasawa",
        "nakamura:III.3",
        "nakamura:IV.4",
        "example1:invariant",
        "ce:u=1,v=2",
        "ce:u=2,v=2",
    ] {
        let h = hodge(id);
        for notion in Notion::ALL {
            let r = check_formality(&h, notion).unwrap();
            assert_eq!(r.formal, r.witness.is_none(), "{id} {notion}");
            if let Some(w) = &r.witness {
                assert!(recheck_witness(&h, notion, w).unwrap(), "{id} {notion}");
                assert!(!w.violation.is_zero());
            }
        }
    }
}

#[test]
fn aeppli_descriptions_agree_everywhere() {
    for id in catalog_ids() {
        let h = hodge(&id);
        let r = check_formality(&h, Notion::Aeppli).unwrap();
        let detail = r.aeppli.unwrap();
        assert_eq!(detail.module_condition, detail.condition_three(), "{id}");
        assert_eq!(r.formal, detail.module_condition, "{id}");
    }
}

#[test]
fn hopf_surface_fails_only_aeppli() {
    let h = hodge("ce:u=0,v=1");
    for r in check_all(&h).unwrap() {
        assert_eq!(r.formal, r.notion != Notion::Aeppli, "{}", r.notion);
    }
}

#[test]
fn calabi_eckmann_bott_chern_witness() {
    let h = hodge("ce:u=1,v=2");
    let m = h.model();
    let r = check_formality(&h, Notion::BottChern).unwrap();
    let w = r.witness.unwrap();
    let exact = w.exact_part.unwrap();
    // ω₁² = 0 here, so the exact part is a multiple of ∂∂̄(φφ̄) = ω₂²
    assert!(exact.image.ratio_to(&form(m, "w2*w2")).is_some());
    assert_eq!(m.ddbar(&form(m, "phi*phibar")).unwrap(), form(m, "w2*w2"));
}

#[test]
fn conjugation_preserves_harmonic_spaces() {
    for id in [
        "iwasawa",
        "nakamura:IV.3",
        "nakamura:V.7",
        "example1:invariant",
        "ce:u=1,v=2",
    ] {
        let h = hodge(id);
        let m = h.model();
        let n = h.n();
        for p in 0..=n {
            for q in 0..=n {
                for (theory, image) in [
                    (Theory::BottChern, Theory::BottChern),
                    (Theory::Aeppli, Theory::Aeppli),
                    (Theory::Dolbeault, Theory::ConjDolbeault),
                ] {
                    for f in h.harmonic(theory, p, q).unwrap().forms {
                        let c = m.conj(&f).unwrap();
                        let ok = h.is_harmonic(image, Degree::Bi(q, p), &c).unwrap();
                        assert!(ok, "{id} {theory} ({p},{q})");
                    }
                }
            }
        }
        // the conjugate of a failing product is a failing product of conjugate harmonic forms
        let r = check_formality(&h, Notion::BottChern).unwrap();
        if let Some(w) = r.witness {
            let c = m.conj(&w.result).unwrap();
            let (p, q) = m.bidegree_of(&c).unwrap();
            assert!(!h.is_harmonic(Theory::BottChern, Degree::Bi(p, q), &c).unwrap(), "{id}");
        }
    }
}
