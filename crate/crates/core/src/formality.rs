//! Geometric formality of a fixed inner product, decided on harmonic bases.
//!
//! Every notion is bilinear in its inputs, so checking all pairs of basis elements
//! decides it. Pairs are scanned in lexicographic order of the left bidegree, then
//! the right bidegree, then the two basis indices; the first failure is the witness.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::Form;
use crate::hodge::{Degree, Equation, Hodge, HodgeError, Theory};
use crate::linalg::{solve_min_norm, Scalar, Subspace};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Notion {
    #[serde(rename = "geom_dolbeault")]
    Dolbeault,
    #[serde(rename = "geom_bott_chern")]
    BottChern,
    #[serde(rename = "geom_abc")]
    Abc,
    #[serde(rename = "geom_aeppli")]
    Aeppli,
    #[serde(rename = "geom_de_rham")]
    DeRham,
}

impl Notion {
    pub const ALL: [Notion; 5] = [
        Notion::Dolbeault,
        Notion::BottChern,
        Notion::Abc,
        Notion::Aeppli,
        Notion::DeRham,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Notion::Dolbeault => "geom_dolbeault",
            Notion::BottChern => "geom_bott_chern",
            Notion::Abc => "geom_abc",
            Notion::Aeppli => "geom_aeppli",
            Notion::DeRham => "geom_de_rham",
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Notion::Dolbeault => "geometrically Dolbeault formal",
            Notion::BottChern => "geometrically Bott-Chern formal",
            Notion::Abc => "ABC-geometrically formal",
            Notion::Aeppli => "geometrically Aeppli formal",
            Notion::DeRham => "geometrically formal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown formality notion `{0}` (expected dolbeault, bott-chern, abc, aeppli or de-rham)")]
pub struct UnknownNotion(pub String);

impl FromStr for Notion {
    type Err = UnknownNotion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        let key = key.strip_prefix("geom-").unwrap_or(&key);
        Ok(match key {
            "dolbeault" | "dbar" => Notion::Dolbeault,
            "bott-chern" | "bc" => Notion::BottChern,
            "abc" => Notion::Abc,
            "aeppli" | "a" => Notion::Aeppli,
            "de-rham" | "derham" | "dr" | "riemannian" => Notion::DeRham,
            _ => return Err(UnknownNotion(s.to_string())),
        })
    }
}

/// What was done to the harmonic inputs before testing the result.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Operation {
    Wedge,
    Del,
    Dbar,
}

/// Which requirement the tested form failed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    /// A defining equation of a harmonic space is violated.
    Equation(Equation),
    /// The form is outside `ℋ_A + ℋ_BC`.
    OutsideAbcSpace,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::Equation(e) => write!(f, "{e} = 0"),
            Requirement::OutsideAbcSpace => f.write_str("membership in ℋ_A + ℋ_BC"),
        }
    }
}

/// `∂∂̄ potential = image`, the exact part of a Bott-Chern-closed product.
#[derive(Clone, Debug)]
pub struct ExactPart {
    pub potential: Form,
    pub image: Form,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub left: Form,
    pub left_degree: Degree,
    /// `None` for the closure checks of ABC formality under ∂ and ∂̄.
    pub right: Option<(Form, Degree)>,
    pub operation: Operation,
    pub result: Form,
    pub result_degree: Degree,
    pub requirement: Requirement,
    /// The failed operator applied to `result`, or for membership the component off the space.
    pub violation: Form,
    pub exact_part: Option<ExactPart>,
}

/// The two equivalent descriptions of geometric Aeppli formality, decided separately.
#[derive(Clone, Debug)]
pub struct AeppliDetail {
    /// `ℋ_A · ℋ_BC ⊆ ℋ_A`.
    pub module_condition: bool,
    /// `ℋ_∂̄ = ℋ_BC = ℋ_A` in every bidegree.
    pub spaces_coincide: bool,
    /// `ℋ_dR^k = ⊕_{p+q=k} ℋ^{p,q}`.
    pub de_rham_decomposes: bool,
    /// The common space is closed under the wedge product.
    pub closed_under_wedge: bool,
}

impl AeppliDetail {
    pub fn condition_three(&self) -> bool {
        self.spaces_coincide && self.de_rham_decomposes && self.closed_under_wedge
    }
}

#[derive(Clone, Debug)]
pub struct FormalityReport {
    pub notion: Notion,
    pub formal: bool,
    pub witness: Option<Witness>,
    pub aeppli: Option<AeppliDetail>,
    pub note: Option<&'static str>,
}

const CN_NOTE: &str =
    "harmonic forms of an invariant model have constant pointwise norm, so this is also the CN variant";

/// A harmonic basis reduced to what the scan needs.
struct Basis {
    degree: Degree,
    forms: Vec<Form>,
}

fn bidegrees(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(move |p| (0..=n).map(move |q| (p, q)))
}

fn harmonic_bases(hodge: &Hodge, theory: Theory) -> Result<Vec<Basis>, HodgeError> {
    let n = hodge.n();
    if theory == Theory::DeRham {
        return (0..=2 * n)
            .map(|k| {
                let h = hodge.harmonic_space(theory, Degree::Total(k))?;
                Ok(Basis {
                    degree: Degree::Total(k),
                    forms: h.forms,
                })
            })
            .collect();
    }
    bidegrees(n)
        .map(|(p, q)| {
            let h = hodge.harmonic(theory, p, q)?;
            Ok(Basis {
                degree: Degree::Bi(p, q),
                forms: h.forms,
            })
        })
        .collect()
}

fn product_degree(a: Degree, b: Degree, n: usize) -> Option<Degree> {
    match (a, b) {
        (Degree::Bi(p, q), Degree::Bi(r, s)) if p + r <= n && q + s <= n => Some(Degree::Bi(p + r, q + s)),
        (Degree::Total(k), Degree::Total(l)) if k + l <= 2 * n => Some(Degree::Total(k + l)),
        _ => None,
    }
}

/// The first defining equation of `theory` that `f` violates, with the offending value.
fn failed_equation(hodge: &Hodge, theory: Theory, degree: Degree, f: &Form) -> Result<(Equation, Form), HodgeError> {
    let v = hodge.form_to_vec(degree, f)?;
    for (eq, m) in hodge.harmonic_conditions(theory, degree)? {
        let img = m.mul_vec(&v)?;
        if img.iter().any(|x| !x.is_zero()) {
            let target = target_degree(eq, degree);
            return Ok((eq, hodge.vec_to_form(target, &img)));
        }
    }
    Err(HodgeError::Invariant(format!(
        "form outside the {theory} harmonic space satisfies every equation"
    )))
}

fn target_degree(eq: Equation, degree: Degree) -> Degree {
    match (eq, degree) {
        (Equation::Del, Degree::Bi(p, q)) => Degree::Bi(p + 1, q),
        (Equation::Dbar, Degree::Bi(p, q)) => Degree::Bi(p, q + 1),
        (Equation::Ddbar, Degree::Bi(p, q)) => Degree::Bi(p + 1, q + 1),
        (Equation::DelAdjoint, Degree::Bi(p, q)) => Degree::Bi(p - 1, q),
        (Equation::DbarAdjoint, Degree::Bi(p, q)) => Degree::Bi(p, q - 1),
        (Equation::DdbarAdjoint, Degree::Bi(p, q)) => Degree::Bi(p - 1, q - 1),
        (Equation::D, Degree::Total(k)) => Degree::Total(k + 1),
        (Equation::DAdjoint, Degree::Total(k)) => Degree::Total(k - 1),
        _ => degree,
    }
}

/// Decomposes a Bott-Chern-closed form into its harmonic part and `∂∂̄ y`, `y` of minimum norm.
fn bc_exact_part(hodge: &Hodge, f: &Form, p: usize, q: usize) -> Result<Option<ExactPart>, HodgeError> {
    if p == 0 || q == 0 || !hodge.is_closed(Theory::BottChern, Degree::Bi(p, q), f)? {
        return Ok(None);
    }
    let class = hodge.class_of(f, Theory::BottChern, Degree::Bi(p, q))?;
    let exact = f - &class.harmonic;
    let v = hodge.model().to_vec(&exact, p, q)?;
    let m = hodge.ops().ddbar(p - 1, q - 1);
    let y = solve_min_norm(m, &v, &hodge.weights(p - 1, q - 1))?
        .ok_or_else(|| HodgeError::Invariant("exact part of a Bott-Chern-closed form is not ∂∂̄-exact".into()))?;
    let potential = hodge.model().from_vec(p - 1, q - 1, &y);
    let image = hodge.model().ddbar(&potential)?;
    Ok(Some(ExactPart { potential, image }))
}

/// A failing product: left block and index, right block and index, the product and its degree.
type Hit = (usize, usize, usize, usize, Form, Degree);

/// Scans all ordered pairs of basis forms; `accept` decides whether a product passes.
fn scan_products(
    hodge: &Hodge,
    left: &[Basis],
    right: &[Basis],
    mut accept: impl FnMut(Degree, &Form) -> Result<bool, HodgeError>,
) -> Result<Option<Hit>, HodgeError> {
    let n = hodge.n();
    let model = hodge.model();
    for (a, lb) in left.iter().enumerate() {
        for (b, rb) in right.iter().enumerate() {
            let Some(target) = product_degree(lb.degree, rb.degree, n) else {
                continue;
            };
            for (i, x) in lb.forms.iter().enumerate() {
                for (j, y) in rb.forms.iter().enumerate() {
                    let prod = model.wedge(x, y)?;
                    if !accept(target, &prod)? {
                        return Ok(Some((a, i, b, j, prod, target)));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn product_witness(
    hodge: &Hodge,
    theory: Theory,
    left: &[Basis],
    right: &[Basis],
) -> Result<Option<Witness>, HodgeError> {
    let found = scan_products(hodge, left, right, |deg, prod| hodge.is_harmonic(theory, deg, prod))?;
    let Some((a, i, b, j, prod, target)) = found else {
        return Ok(None);
    };
    let (eq, violation) = failed_equation(hodge, theory, target, &prod)?;
    let exact_part = match (theory, eq, target) {
        (Theory::BottChern, Equation::DdbarAdjoint, Degree::Bi(p, q)) => bc_exact_part(hodge, &prod, p, q)?,
        _ => None,
    };
    Ok(Some(Witness {
        left: left[a].forms[i].clone(),
        left_degree: left[a].degree,
        right: Some((right[b].forms[j].clone(), right[b].degree)),
        operation: Operation::Wedge,
        result: prod,
        result_degree: target,
        requirement: Requirement::Equation(eq),
        violation,
        exact_part,
    }))
}

fn abc_spaces(hodge: &Hodge) -> Result<Vec<(Degree, Subspace)>, HodgeError> {
    bidegrees(hodge.n())
        .map(|(p, q)| {
            let d = Degree::Bi(p, q);
            let a = hodge.harmonic_space(Theory::Aeppli, d)?.space;
            let bc = hodge.harmonic_space(Theory::BottChern, d)?.space;
            Ok((d, a.sum(&bc)?))
        })
        .collect()
}

fn abc_witness(hodge: &Hodge) -> Result<Option<Witness>, HodgeError> {
    let n = hodge.n();
    let model = hodge.model();
    let spaces = abc_spaces(hodge)?;
    let space_at = |p: usize, q: usize| &spaces[p * (n + 1) + q].1;
    let outside = |target: Degree, f: &Form| -> Result<Option<Form>, HodgeError> {
        let Degree::Bi(p, q) = target else {
            unreachable!("bigraded")
        };
        let v = model.to_vec(f, p, q)?;
        let s = space_at(p, q);
        if s.contains(&v)? {
            return Ok(None);
        }
        let proj = s.project(&v, &hodge.weights(p, q))?;
        let off: Vec<Scalar> = v.iter().zip(&proj).map(|(a, b)| a - b).collect();
        Ok(Some(model.from_vec(p, q, &off)))
    };
    let bases: Vec<Basis> = spaces
        .iter()
        .map(|(d, s)| Basis {
            degree: *d,
            forms: s.basis().iter().map(|v| hodge.vec_to_form(*d, v)).collect(),
        })
        .collect();
    // closure under ∂ and ∂̄ first, then products
    for b in &bases {
        let Degree::Bi(p, q) = b.degree else { continue };
        for x in &b.forms {
            for (op, target, img) in [
                (Operation::Del, (p + 1, q), model.del(x)?),
                (Operation::Dbar, (p, q + 1), model.dbar(x)?),
            ] {
                if target.0 > n || target.1 > n {
                    continue;
                }
                let td = Degree::Bi(target.0, target.1);
                if let Some(violation) = outside(td, &img)? {
                    return Ok(Some(Witness {
                        left: x.clone(),
                        left_degree: b.degree,
                        right: None,
                        operation: op,
                        result: img,
                        result_degree: td,
                        requirement: Requirement::OutsideAbcSpace,
                        violation,
                        exact_part: None,
                    }));
                }
            }
        }
    }
    let found = scan_products(hodge, &bases, &bases, |deg, prod| Ok(outside(deg, prod)?.is_none()))?;
    let Some((a, i, b, j, prod, target)) = found else {
        return Ok(None);
    };
    let violation = outside(target, &prod)?.expect("product failed the membership test");
    Ok(Some(Witness {
        left: bases[a].forms[i].clone(),
        left_degree: bases[a].degree,
        right: Some((bases[b].forms[j].clone(), bases[b].degree)),
        operation: Operation::Wedge,
        result: prod,
        result_degree: target,
        requirement: Requirement::OutsideAbcSpace,
        violation,
        exact_part: None,
    }))
}

fn aeppli_detail(hodge: &Hodge, module_witness: &Option<Witness>) -> Result<AeppliDetail, HodgeError> {
    let n = hodge.n();
    let mut spaces_coincide = true;
    for (p, q) in bidegrees(n) {
        let d = Degree::Bi(p, q);
        let bc = hodge.harmonic_space(Theory::BottChern, d)?.space;
        if hodge.harmonic_space(Theory::Dolbeault, d)?.space != bc
            || hodge.harmonic_space(Theory::Aeppli, d)?.space != bc
        {
            spaces_coincide = false;
            break;
        }
    }
    // embed the bigraded Bott-Chern spaces into the total complex
    let mut de_rham_decomposes = true;
    for k in 0..=2 * n {
        let mut vectors = Vec::new();
        for p in k.saturating_sub(n)..=k.min(n) {
            for f in hodge.harmonic(Theory::BottChern, p, k - p)?.forms {
                vectors.push(hodge.total_to_vec(&f, k)?);
            }
        }
        let sum = Subspace::span(hodge.total_len(k), &vectors)?;
        if sum != hodge.harmonic_space(Theory::DeRham, Degree::Total(k))?.space {
            de_rham_decomposes = false;
            break;
        }
    }
    let bc = harmonic_bases(hodge, Theory::BottChern)?;
    let closed_under_wedge = product_witness(hodge, Theory::BottChern, &bc, &bc)?.is_none();
    Ok(AeppliDetail {
        module_condition: module_witness.is_none(),
        spaces_coincide,
        de_rham_decomposes,
        closed_under_wedge,
    })
}

/// Decides one notion for the inner product carried by `hodge`.
pub fn check_formality(hodge: &Hodge, notion: Notion) -> Result<FormalityReport, HodgeError> {
    let (witness, aeppli, note) = match notion {
        Notion::Dolbeault => {
            let b = harmonic_bases(hodge, Theory::Dolbeault)?;
            (product_witness(hodge, Theory::Dolbeault, &b, &b)?, None, None)
        }
        Notion::BottChern => {
            let b = harmonic_bases(hodge, Theory::BottChern)?;
            (product_witness(hodge, Theory::BottChern, &b, &b)?, None, Some(CN_NOTE))
        }
        Notion::Abc => (abc_witness(hodge)?, None, Some(CN_NOTE)),
        Notion::Aeppli => {
            let a = harmonic_bases(hodge, Theory::Aeppli)?;
            let bc = harmonic_bases(hodge, Theory::BottChern)?;
            let w = product_witness(hodge, Theory::Aeppli, &a, &bc)?;
            let detail = aeppli_detail(hodge, &w)?;
            (w, Some(detail), None)
        }
        Notion::DeRham => {
            let b = harmonic_bases(hodge, Theory::DeRham)?;
            (product_witness(hodge, Theory::DeRham, &b, &b)?, None, None)
        }
    };
    Ok(FormalityReport {
        notion,
        formal: witness.is_none(),
        witness,
        aeppli,
        note,
    })
}

/// Re-evaluates a witness from its inputs; true when the recorded failure reproduces.
pub fn recheck_witness(hodge: &Hodge, notion: Notion, w: &Witness) -> Result<bool, HodgeError> {
    let model = hodge.model();
    let result = match (&w.right, w.operation) {
        (Some((r, _)), Operation::Wedge) => model.wedge(&w.left, r)?,
        (None, Operation::Del) => model.del(&w.left)?,
        (None, Operation::Dbar) => model.dbar(&w.left)?,
        _ => return Ok(false),
    };
    if result != w.result || w.violation.is_zero() {
        return Ok(false);
    }
    match w.requirement {
        Requirement::Equation(eq) => {
            let theory = match notion {
                Notion::Dolbeault => Theory::Dolbeault,
                Notion::BottChern => Theory::BottChern,
                Notion::Aeppli => Theory::Aeppli,
                Notion::DeRham => Theory::DeRham,
                Notion::Abc => return Ok(false),
            };
            let v = hodge.form_to_vec(w.result_degree, &result)?;
            for (e, m) in hodge.harmonic_conditions(theory, w.result_degree)? {
                if e == eq {
                    let img = hodge.vec_to_form(target_degree(e, w.result_degree), &m.mul_vec(&v)?);
                    return Ok(img == w.violation);
                }
            }
            Ok(false)
        }
        Requirement::OutsideAbcSpace => {
            let Degree::Bi(p, q) = w.result_degree else {
                return Ok(false);
            };
            let d = Degree::Bi(p, q);
            let s = hodge
                .harmonic_space(Theory::Aeppli, d)?
                .space
                .sum(&hodge.harmonic_space(Theory::BottChern, d)?.space)?;
            Ok(!s.contains(&model.to_vec(&result, p, q)?)?)
        }
    }
}

/// A ∂̄-closed `(p,0)` form with `∂ ≠ 0`.
#[derive(Clone, Debug)]
pub struct HolomorphicWitness {
    pub p: usize,
    pub form: Form,
    pub del: Form,
}

/// Searches holomorphic `(p,0)` forms, `p = 1..n`, for one that is not d-closed.
///
/// Such a form rules out geometric Bott-Chern formality for every inner product on the model.
pub fn holomorphic_closedness_obstruction(hodge: &Hodge) -> Result<Option<HolomorphicWitness>, HodgeError> {
    let model = hodge.model();
    for p in 1..=hodge.n() {
        let ker = hodge.ops().dbar(p, 0).kernel();
        for v in ker.basis() {
            let img = hodge.ops().del(p, 0).mul_vec(v)?;
            if img.iter().any(|x| !x.is_zero()) {
                return Ok(Some(HolomorphicWitness {
                    p,
                    form: model.from_vec(p, 0, v),
                    del: model.from_vec(p + 1, 0, &img),
                }));
            }
        }
    }
    Ok(None)
}

/// The four equalities forced on `(p,0)`, `(0,p)`, `(p,n)` and `(n,p)` forms by Bott-Chern formality.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct DdbarRow {
    pub p: usize,
    /// `ℋ_BC^{p,0} = ℋ_∂̄^{p,0}`.
    pub bc_dbar: bool,
    /// `ℋ_BC^{0,p} = ℋ_∂^{0,p}`.
    pub bc_del: bool,
    /// `ℋ_A^{p,n} = ℋ_∂̄^{p,n}`.
    pub aeppli_dbar: bool,
    /// `ℋ_A^{n,p} = ℋ_∂^{n,p}`.
    pub aeppli_del: bool,
}

impl DdbarRow {
    pub fn all(&self) -> bool {
        self.bc_dbar && self.bc_del && self.aeppli_dbar && self.aeppli_del
    }
}

pub fn ddbar_p0_report(hodge: &Hodge) -> Result<Vec<DdbarRow>, HodgeError> {
    let n = hodge.n();
    let same = |a: Theory, b: Theory, p: usize, q: usize| -> Result<bool, HodgeError> {
        Ok(hodge.harmonic(a, p, q)?.space == hodge.harmonic(b, p, q)?.space)
    };
    (0..=n)
        .map(|p| {
            Ok(DdbarRow {
                p,
                bc_dbar: same(Theory::BottChern, Theory::Dolbeault, p, 0)?,
                bc_del: same(Theory::BottChern, Theory::ConjDolbeault, 0, p)?,
                aeppli_dbar: same(Theory::Aeppli, Theory::Dolbeault, p, n)?,
                aeppli_del: same(Theory::Aeppli, Theory::ConjDolbeault, n, p)?,
            })
        })
        .collect()
}

/// Verdicts for all notions, checked against the implications between them.
pub fn check_all(hodge: &Hodge) -> Result<Vec<FormalityReport>, HodgeError> {
    let reports: Vec<FormalityReport> = Notion::ALL
        .iter()
        .map(|&n| check_formality(hodge, n))
        .collect::<Result<_, _>>()?;
    let get = |n: Notion| {
        reports
            .iter()
            .find(|r| r.notion == n)
            .map(|r| r.formal)
            .unwrap_or(false)
    };
    let implications = [
        (Notion::Aeppli, Notion::Abc),
        (Notion::Abc, Notion::BottChern),
        (Notion::Aeppli, Notion::Dolbeault),
    ];
    for (a, b) in implications {
        if get(a) && !get(b) {
            return Err(HodgeError::Invariant(format!("{a} holds but {b} fails")));
        }
    }
    if let Some(r) = reports.iter().find(|r| r.notion == Notion::Aeppli) {
        if let Some(d) = &r.aeppli {
            if d.module_condition != d.condition_three() {
                return Err(HodgeError::Invariant(
                    "the two descriptions of Aeppli formality disagree".into(),
                ));
            }
        }
    }
    if get(Notion::BottChern) && holomorphic_closedness_obstruction(hodge)?.is_some() {
        return Err(HodgeError::Invariant(
            "Bott-Chern formal, yet a holomorphic form is not closed".into(),
        ));
    }
    Ok(reports)
}
