mod common;

use std::collections::BTreeMap;

use common::{catalog_ids, form, model, no_params};
use hermform_core::algebra::{AlgebraError, Model};
use hermform_core::catalog::{self, CatalogError, DslErrorKind};
use hermform_core::linalg::Scalar;

fn v17(alpha: i64, beta: i64) -> BTreeMap<String, Scalar> {
    [
        ("alpha".to_string(), Scalar::from_int(alpha)),
        ("beta".to_string(), Scalar::from_int(beta)),
    ]
    .into()
}

#[test]
fn every_entry_loads_and_validates() {
    for id in catalog_ids() {
        let cm = catalog::load(&id, &no_params()).unwrap_or_else(|e| panic!("{id}: {e}"));
        cm.model().unwrap_or_else(|e| panic!("{id}: {e}"));
    }
    assert!(catalog::list().iter().any(|id| id == "nakamura:V.17"));
}

#[test]
fn printed_sources_parse_back() {
    for id in catalog_ids() {
        let spec = catalog::load(&id, &no_params()).unwrap().spec;
        let text = catalog::print(&spec);
        let again = catalog::parse(&text).unwrap_or_else(|e| panic!("{id}: {e}\n{text}"));
        assert_eq!(again, spec, "{id}:\n{text}");
    }
}

#[test]
fn unknown_ids_and_parameters() {
    assert!(matches!(
        catalog::load("nakamura:IX.1", &no_params()),
        Err(CatalogError::UnknownModel(_))
    ));
    assert!(matches!(
        catalog::load("torus:7", &no_params()),
        Err(CatalogError::InvalidParameter(_))
    ));
    assert!(matches!(
        catalog::load("ce:u=1", &no_params()),
        Err(CatalogError::UnknownModel(_))
    ));
    let stray: BTreeMap<String, Scalar> = [("alpha".to_string(), Scalar::one())].into();
    assert!(matches!(
        catalog::load("iwasawa", &stray),
        Err(CatalogError::InvalidParameter(_))
    ));
    assert!(matches!(
        catalog::load("nakamura:III.2", &stray),
        Err(CatalogError::InvalidParameter(_))
    ));
}

#[test]
fn v17_parameters() {
    let m = catalog::load("nakamura:V.17", &v17(2, 3)).unwrap().model().unwrap();
    assert_eq!(m.d(&form(&m, "p5")).unwrap(), form(&m, "-6*p1*p5"));
    assert_eq!(m.d(&form(&m, "p3")).unwrap(), form(&m, "2*p1*p3"));
    for (a, b) in [(0, 1), (1, 0), (1, -2), (-1, 0)] {
        let err = catalog::load("nakamura:V.17", &v17(a, b)).unwrap_err();
        assert!(matches!(err, CatalogError::InvalidParameter(_)), "({a}, {b}): {err}");
    }
    // complex parameters are allowed as long as the product is nonzero
    let complex: BTreeMap<String, Scalar> = [
        ("alpha".to_string(), Scalar::i()),
        ("beta".to_string(), Scalar::gaussian(0, -1)),
    ]
    .into();
    catalog::load("nakamura:V.17", &complex).unwrap().model().unwrap();
}

#[test]
fn iwasawa_is_iii2() {
    let a = catalog::load("iwasawa", &no_params()).unwrap().spec;
    let b = catalog::load("nakamura:III.2", &no_params()).unwrap().spec;
    assert_eq!((a.algebra, a.del, a.dbar), (b.algebra, b.del, b.dbar));
}

#[test]
fn calabi_eckmann_sources() {
    let m = model("ce:u=1,v=2");
    assert_eq!(m.dim(), 4);
    assert_eq!(m.dbar(&form(&m, "phi")).unwrap(), form(&m, "w1 - i*w2"));
    assert_eq!(m.del(&form(&m, "phibar")).unwrap(), form(&m, "w1 + i*w2"));
    let hopf = model("ce:u=0,v=1");
    assert!(hopf.algebra().index_of("w1").is_none());
    assert_eq!(hopf.d(&form(&hopf, "phi")).unwrap(), form(&hopf, "-i*w2"));
    let torus = model("ce:u=0,v=0");
    assert!(torus.d(&form(&torus, "phi")).unwrap().is_zero());
}

#[test]
fn example1_action() {
    let spec = catalog::load("iwasawa", &no_params()).unwrap().spec;
    let good = catalog::holomorphic_action(&spec, &catalog::example1_weights()).unwrap();
    Model::invariant(spec.clone(), good).unwrap();
    // with weights (i, -i, -1), dφ³ = -φ¹φ² has weight 1 while φ³ has weight -1
    let weights = [Scalar::i(), Scalar::gaussian(0, -1), Scalar::from_int(-1)];
    let bad = catalog::holomorphic_action(&spec, &weights).unwrap();
    assert!(matches!(
        Model::invariant(spec.clone(), bad),
        Err(AlgebraError::NotEquivariant { .. })
    ));
    assert!(matches!(
        catalog::holomorphic_action(&spec, &weights[..2]),
        Err(CatalogError::InvalidParameter(_))
    ));
}

#[test]
fn appendix_rows() {
    for case in catalog::nakamura_cases() {
        let params = if case == "V.17" { v17(1, 1) } else { no_params() };
        let row = catalog::appendix_case(case, &params).unwrap();
        let m = catalog::load(&format!("nakamura:{case}"), &params)
            .unwrap()
            .model()
            .unwrap();
        for expr in row.triple.iter().chain([&row.expected()]) {
            let f = form(&m, expr);
            assert!(m.bidegree_of(&f).is_some(), "{case}: `{expr}`");
        }
    }
    let v9 = catalog::appendix_case("V.9", &no_params()).unwrap();
    assert_ne!(v9.expected(), v9.listed);
    assert_ne!(
        catalog::appendix_case("V.17", &v17(1, 1)).unwrap().triple,
        catalog::appendix_case("V.17", &v17(1, -1)).unwrap().triple
    );
}

#[test]
fn expression_errors() {
    let m = model("iwasawa");
    let err = catalog::parse_form(&m, "p1*p9").unwrap_err();
    assert_eq!(err.kind, DslErrorKind::UnknownGenerator("p9".into()));
    assert!(catalog::parse_form(&m, "p1 +").is_err());
    assert!(catalog::parse_form(&m, "(1+i)*p1 - 2/3*q2").is_ok());
}

#[test]
fn dsl_file_with_custom_generators() {
    let src = "\
# a Kodaira-Thurston style surface
model kt dim 2
holo a b
d b = a*abar
";
    let spec = catalog::parse(src).unwrap();
    let m = Model::new(spec).unwrap();
    assert_eq!(m.dbar(&form(&m, "b")).unwrap(), form(&m, "a*abar"));
    assert!(m.del(&form(&m, "b")).unwrap().is_zero());
}
