mod common;

use common::{binomial, catalog_ids, form, hodge, model, naive_rank};
use hermform_core::algebra::{Form, Model};
use hermform_core::hodge::{render_diamond, CohomologyTable, Degree, Hodge, InnerProduct, Route, Theory};
use hermform_core::linalg::Scalar;
use proptest::prelude::*;

type Op = fn(&Model, &Form) -> Result<Form, hermform_core::algebra::AlgebraError>;

/// Matrix of `op` from bidegree `(p, q)` to `(p + dp, q + dq)`, as rows of a dense array.
fn op_rows(m: &Model, op: Op, (p, q): (usize, usize), (dp, dq): (usize, usize)) -> Vec<Vec<Scalar>> {
    let n = m.dim();
    let src = m.basis(p, q).to_vec();
    let (tp, tq) = (p + dp, q + dq);
    if tp > n || tq > n {
        return vec![vec![Scalar::zero(); src.len()]];
    }
    let cols: Vec<Vec<Scalar>> = src
        .iter()
        .map(|mono| {
            m.to_vec(&op(m, &Form::term(mono.clone(), Scalar::one())).unwrap(), tp, tq)
                .unwrap()
        })
        .collect();
    let rows = m.basis_len(tp, tq);
    (0..rows.max(1))
        .map(|r| {
            cols.iter()
                .map(|c| c.get(r).cloned().unwrap_or_else(Scalar::zero))
                .collect()
        })
        .collect()
}

fn ddbar(m: &Model, f: &Form) -> Result<Form, hermform_core::algebra::AlgebraError> {
    m.ddbar(f)
}

fn rank(m: &Model, op: Op, from: (usize, usize), shift: (usize, usize)) -> usize {
    if m.basis_len(from.0, from.1) == 0 {
        return 0;
    }
    naive_rank(&op_rows(m, op, from, shift))
}

fn rank_from(m: &Model, op: Op, p: isize, q: isize, shift: (usize, usize)) -> usize {
    if p < 0 || q < 0 {
        0
    } else {
        rank(m, op, (p as usize, q as usize), shift)
    }
}

/// Joint kernel dimension of ∂ and ∂̄ on `(p, q)`.
fn closed_dim(m: &Model, p: usize, q: usize) -> usize {
    let len = m.basis_len(p, q);
    if len == 0 {
        return 0;
    }
    let mut rows = op_rows(m, Model::del, (p, q), (1, 0));
    rows.extend(op_rows(m, Model::dbar, (p, q), (0, 1)));
    len - naive_rank(&rows)
}

/// Dimension of `im ∂ + im ∂̄` in `(p, q)`.
fn sum_of_images(m: &Model, p: usize, q: usize) -> usize {
    let mut cols = Vec::new();
    for (src, op) in [
        ((p as isize - 1, q as isize), Model::del as Op),
        ((p as isize, q as isize - 1), Model::dbar),
    ] {
        if src.0 < 0 || src.1 < 0 {
            continue;
        }
        let s = (src.0 as usize, src.1 as usize);
        for mono in m.basis(s.0, s.1) {
            cols.push(
                m.to_vec(&op(m, &Form::term(mono.clone(), Scalar::one())).unwrap(), p, q)
                    .unwrap(),
            );
        }
    }
    naive_rank(&cols)
}

type Grid = Vec<Vec<usize>>;

fn oracle_table(m: &Model) -> (Grid, Grid, Grid) {
    let n = m.dim();
    let mut dbar = vec![vec![0; n + 1]; n + 1];
    let mut bc = dbar.clone();
    let mut a = dbar.clone();
    for p in 0..=n {
        for q in 0..=n {
            let (pi, qi) = (p as isize, q as isize);
            let len = m.basis_len(p, q);
            dbar[p][q] = len - rank(m, Model::dbar, (p, q), (0, 1)) - rank_from(m, Model::dbar, pi, qi - 1, (0, 1));
            bc[p][q] = closed_dim(m, p, q) - rank_from(m, ddbar, pi - 1, qi - 1, (1, 1));
            a[p][q] = len - rank(m, ddbar, (p, q), (1, 1)) - sum_of_images(m, p, q);
        }
    }
    (dbar, bc, a)
}

#[test]
fn bigraded_dimensions_match_independent_oracle() {
    for id in catalog_ids() {
        let m = model(&id);
        let table = Hodge::new(m.clone()).unwrap().table().unwrap();
        let (dbar, bc, a) = oracle_table(&m);
        assert_eq!(table.h_dbar, dbar, "{id}: Dolbeault");
        assert_eq!(table.h_bc, bc, "{id}: Bott-Chern");
        assert_eq!(table.h_a, a, "{id}: Aeppli");
    }
}

#[test]
fn de_rham_matches_independent_oracle() {
    for id in [
        "iwasawa",
        "nakamura:III.3",
        "nakamura:IV.2",
        "example1:invariant",
        "ce:u=1,v=2",
        "torus:2",
    ] {
        let h = hodge(id);
        let m = h.model();
        let n = m.dim();
        let total_rank = |k: usize| -> usize {
            if k >= 2 * n {
                return 0;
            }
            let mut cols = Vec::new();
            for p in k.saturating_sub(n)..=k.min(n) {
                for mono in m.basis(p, k - p) {
                    let image = m.d(&Form::term(mono.clone(), Scalar::one())).unwrap();
                    cols.push(h.total_to_vec(&image, k + 1).unwrap());
                }
            }
            naive_rank(&cols)
        };
        let betti: Vec<usize> = (0..=2 * n)
            .map(|k| h.total_len(k) - total_rank(k) - if k == 0 { 0 } else { total_rank(k - 1) })
            .collect();
        assert_eq!(h.table().unwrap().betti, betti, "{id}");
    }
}

#[test]
fn iwasawa_numbers() {
    let t = hodge("iwasawa").table().unwrap();
    assert_eq!(
        (
            t.h_dbar[1][0],
            t.h_dbar[0][1],
            t.h_dbar[2][0],
            t.h_dbar[1][1],
            t.h_dbar[0][2]
        ),
        (3, 2, 3, 6, 2)
    );
    assert_eq!(
        (
            t.h_bc[1][0],
            t.h_bc[0][1],
            t.h_bc[2][0],
            t.h_bc[1][1],
            t.h_bc[0][2],
            t.h_bc[2][2]
        ),
        (2, 2, 3, 4, 3, 8)
    );
    assert_eq!(t.betti, [1, 4, 8, 10, 8, 4, 1]);
}

#[test]
fn torus_numbers() {
    for n in 1..=4 {
        let t = hodge(&format!("torus:{n}")).table().unwrap();
        for p in 0..=n {
            for q in 0..=n {
                let want = binomial(n, p) * binomial(n, q);
                assert_eq!((t.h_dbar[p][q], t.h_bc[p][q], t.h_a[p][q]), (want, want, want));
            }
        }
        assert_eq!(t.betti, (0..=2 * n).map(|k| binomial(2 * n, k)).collect::<Vec<_>>());
    }
}

#[test]
fn adjoint_and_star_routes_agree() {
    for id in [
        "iwasawa",
        "nakamura:IV.3",
        "example1:invariant",
        "ce:u=1,v=1",
        "ce:u=1,v=2",
    ] {
        let h = hodge(id);
        let n = h.n();
        for theory in Theory::ALL {
            let degrees: Vec<Degree> = if theory.is_bigraded() {
                (0..=n).flat_map(|p| (0..=n).map(move |q| Degree::Bi(p, q))).collect()
            } else {
                (0..=2 * n).map(Degree::Total).collect()
            };
            for d in degrees {
                let a = h.harmonic_subspace(theory, d, Route::Adjoint).unwrap();
                let s = h.harmonic_subspace(theory, d, Route::Star).unwrap();
                assert_eq!(a, s, "{id} {theory} {d:?}");
            }
        }
    }
}

#[test]
fn harmonic_forms_are_orthogonal_to_exact_forms() {
    let h = hodge("nakamura:IV.4");
    let m = h.model();
    let n = h.n();
    for p in 1..=n {
        for q in 1..=n {
            for f in h.harmonic(Theory::BottChern, p, q).unwrap().forms {
                for mono in m.basis(p - 1, q - 1) {
                    let e = m.ddbar(&Form::term(mono.clone(), Scalar::one())).unwrap();
                    assert!(h.inner(&f, &e, p, q).unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn classes_of_harmonic_and_exact_forms() {
    let h = hodge("iwasawa");
    let m = h.model();
    let basis = h.harmonic(Theory::BottChern, 1, 1).unwrap();
    for (k, f) in basis.forms.iter().enumerate() {
        let c = h.class_of(f, Theory::BottChern, Degree::Bi(1, 1)).unwrap();
        assert_eq!(&c.harmonic, f);
        assert!(c
            .coordinates
            .iter()
            .enumerate()
            .all(|(j, x)| if j == k { x.is_one() } else { x.is_zero() }));
    }
    let exact = m.ddbar(&form(m, "p3*q3")).unwrap();
    assert!(h
        .class_of(&exact, Theory::BottChern, Degree::Bi(2, 2))
        .unwrap()
        .is_zero());
    // φ³ is not closed, so it has no Bott-Chern class
    assert!(h.class_of(&form(m, "p3"), Theory::BottChern, Degree::Bi(1, 0)).is_err());
}

#[test]
fn diamond_puts_degree_zero_at_the_bottom() {
    let t = hodge("iwasawa").table().unwrap();
    let text = render_diamond(&t, Theory::DeRham);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines, ["1", "4", "8", "10", "8", "4", "1"]);
    let bc = render_diamond(&t, Theory::BottChern);
    let lines: Vec<&str> = bc.lines().map(str::trim).collect();
    assert_eq!(lines.last(), Some(&"1"));
    assert_eq!(
        lines[lines.len() - 2].split_whitespace().collect::<Vec<_>>(),
        ["2", "2"]
    );
}

#[test]
fn star_is_an_involution_up_to_sign() {
    let h = hodge("ce:u=1,v=2");
    let m = h.model();
    let n = h.n();
    for p in 0..=n {
        for q in 0..=n {
            for mono in m.basis(p, q) {
                let f = Form::term(mono.clone(), Scalar::gaussian(1, 2));
                let back = h.star(&h.star(&f).unwrap()).unwrap();
                let ratio = back.ratio_to(&f).expect("∗∗ is a multiple of the identity");
                assert!(ratio == Scalar::one() || ratio == Scalar::from_int(-1), "{ratio}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Harmonic dimensions do not depend on the inner product.
    #[test]
    fn harmonic_dimensions_are_metric_independent(k in 0usize..3, w in prop::collection::vec(1i64..=4, 6)) {
        let id = ["iwasawa", "nakamura:III.3", "ce:u=1,v=1"][k];
        let m = model(id);
        let gens = m.algebra().generators().to_vec();
        let mut weights = vec![Scalar::one(); gens.len()];
        let mut next = 0;
        for (g, gen) in gens.iter().enumerate() {
            if g <= gen.conjugate {
                let x = Scalar::from_int(w[next % w.len()]);
                weights[g] = x.clone();
                weights[gen.conjugate] = x;
                next += 1;
            }
        }
        let ip = InnerProduct::from_generator_weights(&m, weights).unwrap();
        let h = Hodge::with_inner_product(m.clone(), ip).unwrap();
        let harmonic = CohomologyTable::from_harmonic(&h).unwrap();
        prop_assert_eq!(harmonic, Hodge::new(m).unwrap().table().unwrap());
    }
}
