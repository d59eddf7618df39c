#![allow(dead_code)]

use std::collections::BTreeMap;

use hermform_core::algebra::{Form, Model};
use hermform_core::catalog;
use hermform_core::hodge::Hodge;
use hermform_core::linalg::Scalar;

pub fn no_params() -> BTreeMap<String, Scalar> {
    BTreeMap::new()
}

pub fn model(id: &str) -> Model {
    catalog::load(id, &no_params()).unwrap().model().unwrap()
}

pub fn hodge(id: &str) -> Hodge {
    Hodge::new(model(id)).unwrap()
}

pub fn form(model: &Model, expr: &str) -> Form {
    catalog::parse_form(model, expr).unwrap_or_else(|e| panic!("`{expr}`: {e}"))
}

pub fn appendix_ids() -> Vec<String> {
    catalog::nakamura_cases()
        .iter()
        .map(|c| format!("nakamura:{c}"))
        .collect()
}

/// Every concrete catalog model, with Calabi-Eckmann and torus patterns instantiated at small sizes.
pub fn catalog_ids() -> Vec<String> {
    let mut ids = appendix_ids();
    ids.push("iwasawa".into());
    ids.push("example1:invariant".into());
    ids.extend((1..=4).map(|n| format!("torus:{n}")));
    for (u, v) in [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2), (2, 3)] {
        ids.push(format!("ce:u={u},v={v}"));
    }
    ids
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Adds `count` random elements of `ker ∂∂̄` to both potentials and checks that the
/// verdict and the class modulo indeterminacy do not move.
pub fn perturbation_invariant(hodge: &Hodge, triple: [&Form; 3], count: usize, seed: u64) -> Result<(), String> {
    use hermform_core::massey::{potential_freedom, triple_abc_massey, triple_abc_massey_with};
    use rand::{Rng, SeedableRng};

    let model = hodge.model();
    let [a, b, c] = triple;
    let base = triple_abc_massey(hodge, a, b, c).map_err(|e| e.to_string())?;
    let [(p, q), (r, s), (u, v)] = base.degrees;
    // a product landing in bidegree (k, 0) or (0, k) vanishes and its potential is fixed at zero
    let freedom = |p: usize, q: usize| (p > 0 && q > 0).then(|| (p - 1, q - 1, potential_freedom(hodge, p - 1, q - 1)));
    let free_ab = freedom(p + r, q + s);
    let free_bc = freedom(r + u, s + v);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut random_kernel = |free: &Option<(usize, usize, hermform_core::linalg::Subspace)>| -> Form {
        let Some((p, q, space)) = free else {
            return Form::zero(model.ngens());
        };
        let coeffs: Vec<Scalar> = space
            .basis()
            .iter()
            .map(|_| Scalar::gaussian(rng.gen_range(-5..=5), rng.gen_range(-5..=5)))
            .collect();
        let v = hermform_core::linalg::combine(space.basis(), &coeffs, space.ambient());
        model.from_vec(*p, *q, &v)
    };
    for k in 0..count {
        let f_ab = &base.f_ab + &random_kernel(&free_ab);
        let f_bc = &base.f_bc + &random_kernel(&free_bc);
        let other = triple_abc_massey_with(hodge, a, b, c, f_ab, f_bc).map_err(|e| e.to_string())?;
        if other.nonzero != base.nonzero {
            return Err(format!("perturbation {k} flipped the verdict"));
        }
        let diff: Vec<Scalar> = other
            .coordinates
            .iter()
            .zip(&base.coordinates)
            .map(|(x, y)| x - y)
            .collect();
        if !base.indeterminacy.contains(&diff).map_err(|e| e.to_string())? {
            return Err(format!("perturbation {k} moved the class outside the indeterminacy"));
        }
    }
    Ok(())
}

/// Rank by dense Gauss-Jordan elimination, independent of the library's sparse code.
pub fn naive_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(k) = (rank..a.len()).find(|&k| !a[k][c].is_zero()) else {
            continue;
        };
        a.swap(rank, k);
        let inv = a[rank][c].inv();
        let pivot: Vec<Scalar> = a[rank].iter().map(|x| x * &inv).collect();
        for row in a.iter_mut().skip(rank + 1) {
            if !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        a[rank] = pivot;
        rank += 1;
    }
    rank
}
