//! Triple ABC-Massey products of Bott-Chern harmonic forms.

use std::collections::BTreeMap;

use crate::algebra::{Form, Model};
use crate::catalog::{self, AppendixCase, CatalogError, DslError};
use crate::hodge::{Degree, Hodge, HodgeError, Theory};
use crate::linalg::{solve_min_norm, Scalar, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MasseyError {
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("cannot parse `{expr}`: {source}")]
    Expression { expr: String, source: DslError },
    #[error("{which} is zero or not of a single bidegree")]
    NotHomogeneous { which: &'static str },
    #[error("{which} is not Bott-Chern harmonic")]
    NotHarmonic { which: &'static str },
    #[error("{which} is not ∂∂̄-exact, so the Massey product is undefined")]
    Undefined { which: &'static str },
    #[error("the product would have bidegree ({p},{q}), outside the model")]
    OutOfRange { p: i64, q: i64 },
    #[error("supplied potential {which} does not solve its equation")]
    BadPotential { which: &'static str },
}

/// Everything computed for one triple.
#[derive(Clone, Debug)]
pub struct MasseyVerdict {
    pub degrees: [(usize, usize); 3],
    pub f_ab: Form,
    pub f_bc: Form,
    pub representative: Form,
    pub degree: (usize, usize),
    /// Aeppli-harmonic part of the representative.
    pub harmonic: Form,
    /// Coordinates of `harmonic` in the Aeppli harmonic basis.
    pub coordinates: Vec<Scalar>,
    /// Classes of `α ∧ ℋ_A` and `ℋ_A ∧ γ`, in the same coordinates.
    pub indeterminacy: Subspace,
    pub nonzero: bool,
}

fn bidegree(model: &Model, f: &Form, which: &'static str) -> Result<(usize, usize), MasseyError> {
    model.bidegree_of(f).ok_or(MasseyError::NotHomogeneous { which })
}

/// Minimum-norm `f` of bidegree `(p-1, q-1)` with `∂∂̄ f = target`, where `target` has bidegree `(p, q)`.
pub fn solve_potential_at(hodge: &Hodge, target: &Form, p: usize, q: usize) -> Result<Option<Form>, MasseyError> {
    let model = hodge.model();
    if target.is_zero() {
        return Ok(Some(Form::zero(model.ngens())));
    }
    if p == 0 || q == 0 {
        return Ok(None);
    }
    let v = model.to_vec(target, p, q).map_err(HodgeError::from)?;
    let m = hodge.ops().ddbar(p - 1, q - 1);
    let x = solve_min_norm(m, &v, &hodge.weights(p - 1, q - 1)).map_err(HodgeError::from)?;
    Ok(x.map(|x| model.from_vec(p - 1, q - 1, &x)))
}

/// Minimum-norm solution of `∂∂̄ f = target`.
pub fn solve_potential(hodge: &Hodge, target: &Form) -> Result<Form, MasseyError> {
    if target.is_zero() {
        return Ok(Form::zero(hodge.model().ngens()));
    }
    let (p, q) = bidegree(hodge.model(), target, "target")?;
    solve_potential_at(hodge, target, p, q)?.ok_or(MasseyError::Undefined { which: "target" })
}

/// `ker ∂∂̄` in bidegree `(p, q)`, the freedom in choosing a potential there.
pub fn potential_freedom(hodge: &Hodge, p: usize, q: usize) -> Subspace {
    hodge.ops().ddbar(p, q).kernel()
}

fn sign(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

struct Inputs {
    degrees: [(usize, usize); 3],
    ab: Form,
    bc: Form,
}

fn prepare(hodge: &Hodge, a: &Form, b: &Form, c: &Form) -> Result<Inputs, MasseyError> {
    let model = hodge.model();
    let names = ["α", "β", "γ"];
    let mut degrees = [(0, 0); 3];
    for (k, f) in [a, b, c].into_iter().enumerate() {
        let (p, q) = bidegree(model, f, names[k])?;
        if !hodge.is_harmonic(Theory::BottChern, Degree::Bi(p, q), f)? {
            return Err(MasseyError::NotHarmonic { which: names[k] });
        }
        degrees[k] = (p, q);
    }
    let [(p, q), (r, s), (u, v)] = degrees;
    let (dp, dq) = (p as i64 + r as i64 + u as i64 - 1, q as i64 + s as i64 + v as i64 - 1);
    let n = hodge.n() as i64;
    if dp < 0 || dq < 0 || dp > n || dq > n {
        return Err(MasseyError::OutOfRange { p: dp, q: dq });
    }
    let ab = model.wedge(a, b).map_err(HodgeError::from)?.scale(&sign(p + q));
    let bc = model.wedge(b, c).map_err(HodgeError::from)?.scale(&sign(r + s));
    Ok(Inputs { degrees, ab, bc })
}

/// The product with minimum-norm potentials.
pub fn triple_abc_massey(hodge: &Hodge, a: &Form, b: &Form, c: &Form) -> Result<MasseyVerdict, MasseyError> {
    let inp = prepare(hodge, a, b, c)?;
    let [(p, q), (r, s), (u, v)] = inp.degrees;
    let f_ab = solve_potential_at(hodge, &inp.ab, p + r, q + s)?.ok_or(MasseyError::Undefined { which: "α∧β" })?;
    let f_bc = solve_potential_at(hodge, &inp.bc, r + u, s + v)?.ok_or(MasseyError::Undefined { which: "β∧γ" })?;
    finish(hodge, a, c, inp.degrees, f_ab, f_bc)
}

/// The product with caller-chosen potentials, which are checked first.
pub fn triple_abc_massey_with(
    hodge: &Hodge,
    a: &Form,
    b: &Form,
    c: &Form,
    f_ab: Form,
    f_bc: Form,
) -> Result<MasseyVerdict, MasseyError> {
    let inp = prepare(hodge, a, b, c)?;
    let model = hodge.model();
    if model.ddbar(&f_ab).map_err(HodgeError::from)? != inp.ab {
        return Err(MasseyError::BadPotential { which: "f_αβ" });
    }
    if model.ddbar(&f_bc).map_err(HodgeError::from)? != inp.bc {
        return Err(MasseyError::BadPotential { which: "f_βγ" });
    }
    finish(hodge, a, c, inp.degrees, f_ab, f_bc)
}

fn finish(
    hodge: &Hodge,
    a: &Form,
    c: &Form,
    degrees: [(usize, usize); 3],
    f_ab: Form,
    f_bc: Form,
) -> Result<MasseyVerdict, MasseyError> {
    let model = hodge.model();
    let [(p, q), (r, s), (u, v)] = degrees;
    let wedge = |x: &Form, y: &Form| model.wedge(x, y).map_err(HodgeError::from);
    let representative = &wedge(a, &f_bc)?.scale(&sign(p + q)) - &wedge(&f_ab, c)?.scale(&sign(r + s));
    let degree = (p + r + u - 1, q + s + v - 1);
    let target = Degree::Bi(degree.0, degree.1);
    if !hodge.is_closed(Theory::Aeppli, target, &representative)? {
        return Err(HodgeError::Invariant("Massey representative is not ∂∂̄-closed".into()).into());
    }
    let class = hodge.class_of(&representative, Theory::Aeppli, target)?;

    let n = hodge.n();
    let mut spanning = Vec::new();
    // α ∧ ℋ_A^{r+u-1, s+v-1}
    if r + u >= 1 && s + v >= 1 && r + u - 1 <= n && s + v - 1 <= n {
        for xi in hodge.harmonic(Theory::Aeppli, r + u - 1, s + v - 1)?.forms {
            spanning.push(hodge.class_of(&wedge(a, &xi)?, Theory::Aeppli, target)?.coordinates);
        }
    }
    // ℋ_A^{p+r-1, q+s-1} ∧ γ
    if p + r >= 1 && q + s >= 1 && p + r - 1 <= n && q + s - 1 <= n {
        for zeta in hodge.harmonic(Theory::Aeppli, p + r - 1, q + s - 1)?.forms {
            spanning.push(hodge.class_of(&wedge(&zeta, c)?, Theory::Aeppli, target)?.coordinates);
        }
    }
    let indeterminacy = Subspace::span(class.coordinates.len(), &spanning).map_err(HodgeError::from)?;
    let nonzero = !indeterminacy.contains(&class.coordinates).map_err(HodgeError::from)?;
    Ok(MasseyVerdict {
        degrees,
        f_ab,
        f_bc,
        representative,
        degree,
        harmonic: class.harmonic,
        coordinates: class.coordinates,
        indeterminacy,
        nonzero,
    })
}

/// Shifts both potentials of `base` by `count` elements of `ker ∂∂̄` with coefficients drawn from
/// `coeff`, and checks that the verdict and the class modulo indeterminacy stay put.
pub fn perturbation_check(
    hodge: &Hodge,
    [a, b, c]: [&Form; 3],
    base: &MasseyVerdict,
    count: usize,
    mut coeff: impl FnMut() -> Scalar,
) -> Result<(), MasseyError> {
    let model = hodge.model();
    let [(p, q), (r, s), (u, v)] = base.degrees;
    // a potential for a product in bidegree (k, 0) or (0, k) is pinned to zero
    let freedom = |p: usize, q: usize| (p > 0 && q > 0).then(|| (p - 1, q - 1, potential_freedom(hodge, p - 1, q - 1)));
    let free = [freedom(p + r, q + s), freedom(r + u, s + v)];
    for k in 0..count {
        let mut shift = |i: usize| match &free[i] {
            Some((p, q, space)) => {
                let coeffs: Vec<Scalar> = space.basis().iter().map(|_| coeff()).collect();
                model.from_vec(*p, *q, &crate::linalg::combine(space.basis(), &coeffs, space.ambient()))
            }
            None => Form::zero(model.ngens()),
        };
        let (s_ab, s_bc) = (shift(0), shift(1));
        let other = triple_abc_massey_with(hodge, a, b, c, &base.f_ab + &s_ab, &base.f_bc + &s_bc)?;
        let diff: Vec<Scalar> = other
            .coordinates
            .iter()
            .zip(&base.coordinates)
            .map(|(x, y)| x - y)
            .collect();
        if other.nonzero != base.nonzero || !base.indeterminacy.contains(&diff).map_err(HodgeError::from)? {
            return Err(
                HodgeError::Invariant(format!("perturbation {k} of the potentials changed the Massey class")).into(),
            );
        }
    }
    Ok(())
}

/// Outcome of checking one row of the reference table.
#[derive(Clone, Debug)]
pub struct AppendixReport {
    pub case: AppendixCase,
    pub params: BTreeMap<String, Scalar>,
    pub verdict: MasseyVerdict,
    /// The form the harmonic part was compared with.
    pub expected: Form,
    /// Bidegree of the representative as printed, when it differs from the product's.
    pub listed_bidegree_mismatch: Option<(usize, usize)>,
    /// `harmonic = c · expected` with `c ≠ 0`.
    pub scalar: Option<Scalar>,
    pub verified: bool,
}

/// Parses an expression against the model's generators.
pub fn parse_form(model: &Model, expr: &str) -> Result<Form, MasseyError> {
    catalog::parse_form(model, expr).map_err(|source| MasseyError::Expression {
        expr: expr.to_string(),
        source,
    })
}

/// Recomputes one reference row; `params` only matters for V.17.
pub fn verify_appendix_case(case: &str, params: &BTreeMap<String, Scalar>) -> Result<AppendixReport, MasseyError> {
    let entry = catalog::appendix_case(case, params)?;
    let model = catalog::load(&format!("nakamura:{case}"), params)?
        .model()
        .map_err(HodgeError::from)?;
    let hodge = Hodge::new(model)?;
    let model = hodge.model();
    let [a, b, c] = entry.triple.map(|e| parse_form(model, e));
    let verdict = triple_abc_massey(&hodge, &a?, &b?, &c?)?;
    let listed = parse_form(model, entry.listed)?;
    let listed_bidegree_mismatch = model.bidegree_of(&listed).filter(|d| *d != verdict.degree);
    let expected = parse_form(model, entry.expected())?;
    let scalar = verdict.harmonic.ratio_to(&expected).filter(|c| !c.is_zero());
    let verified = verdict.nonzero && scalar.is_some();
    Ok(AppendixReport {
        case: entry,
        params: params.clone(),
        verdict,
        expected,
        listed_bidegree_mismatch,
        scalar,
        verified,
    })
}

/// Every reference row, V.17 at `(α, β) = (1, 1)` and `(1, -1)`.
pub fn appendix_suite() -> Vec<(String, BTreeMap<String, Scalar>)> {
    let mut out = Vec::new();
    for case in catalog::nakamura_cases() {
        if case == "V.17" {
            for beta in [1, -1] {
                let params: BTreeMap<String, Scalar> = [
                    ("alpha".to_string(), Scalar::one()),
                    ("beta".to_string(), Scalar::from_int(beta)),
                ]
                .into();
                out.push((case.to_string(), params));
            }
        } else {
            out.push((case.to_string(), BTreeMap::new()));
        }
    }
    out
}
