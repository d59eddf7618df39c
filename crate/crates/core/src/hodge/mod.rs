//! Differentials as matrices, the Hodge star, harmonic spaces and cohomology dimensions.

mod inner;
mod table;

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

pub use inner::InnerProduct;
pub use table::{render_diamond, CohomologyTable};

use crate::algebra::{AlgebraError, Form, Model};
use crate::linalg::{LinalgError, Matrix, Scalar, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HodgeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{identity} fails as a matrix identity on bidegree {bidegree:?}")]
    NotADifferential {
        identity: &'static str,
        bidegree: (usize, usize),
    },
    #[error("form is not {condition}, so it has no {theory} class")]
    NotClosed { theory: Theory, condition: &'static str },
    #[error("form is not homogeneous of a single degree")]
    NotHomogeneous,
    #[error("{0:?} is not a valid degree for {1}")]
    BadDegree(Degree, Theory),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    Dolbeault,
    ConjDolbeault,
    BottChern,
    Aeppli,
    DeRham,
}

impl Theory {
    pub const ALL: [Theory; 5] = [
        Theory::Dolbeault,
        Theory::ConjDolbeault,
        Theory::BottChern,
        Theory::Aeppli,
        Theory::DeRham,
    ];

    pub fn is_bigraded(self) -> bool {
        self != Theory::DeRham
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Dolbeault => "Dolbeault",
            Theory::ConjDolbeault => "conjugate Dolbeault",
            Theory::BottChern => "Bott-Chern",
            Theory::Aeppli => "Aeppli",
            Theory::DeRham => "de Rham",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Degree {
    Bi(usize, usize),
    Total(usize),
}

/// One defining equation of a harmonic space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Del,
    Dbar,
    Ddbar,
    D,
    DelAdjoint,
    DbarAdjoint,
    DdbarAdjoint,
    DAdjoint,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::Del => "∂",
            Equation::Dbar => "∂̄",
            Equation::Ddbar => "∂∂̄",
            Equation::D => "d",
            Equation::DelAdjoint => "∂*",
            Equation::DbarAdjoint => "∂̄*",
            Equation::DdbarAdjoint => "(∂∂̄)*",
            Equation::DAdjoint => "d*",
        })
    }
}

/// Matrices of ∂ and ∂̄ on every bidegree, in the model's monomial basis.
#[derive(Clone, Debug)]
pub struct DerivationPair {
    n: usize,
    del: Vec<Vec<Matrix>>,
    dbar: Vec<Vec<Matrix>>,
    ddbar: Vec<Vec<Matrix>>,
}

impl DerivationPair {
    pub fn assemble(model: &Model) -> Result<Self, HodgeError> {
        let n = model.dim();
        let build = |p: usize, q: usize, tp: usize, tq: usize, del: bool| -> Result<Matrix, HodgeError> {
            let mut cols = Vec::with_capacity(model.basis_len(p, q));
            for m in model.basis(p, q) {
                let f = Form::term(m.clone(), Scalar::one());
                let img = if del { model.del(&f)? } else { model.dbar(&f)? };
                let v = model.to_vec(&img, tp, tq)?;
                cols.push(v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
            }
            Ok(Matrix::from_columns(model.basis_len(tp, tq), &cols)?)
        };
        let mut del = Vec::with_capacity(n + 1);
        let mut dbar = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let mut drow = Vec::with_capacity(n + 1);
            let mut brow = Vec::with_capacity(n + 1);
            for q in 0..=n {
                drow.push(build(p, q, p + 1, q, true)?);
                brow.push(build(p, q, p, q + 1, false)?);
            }
            del.push(drow);
            dbar.push(brow);
        }
        let mut ddbar = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let mut row = Vec::with_capacity(n + 1);
            for q in 0..=n {
                let m = if q < n {
                    del[p][q + 1].mul(&dbar[p][q])?
                } else {
                    Matrix::zeros(0, dbar[p][q].ncols())
                };
                row.push(m);
            }
            ddbar.push(row);
        }
        let pair = DerivationPair { n, del, dbar, ddbar };
        pair.check_identities()?;
        Ok(pair)
    }

    fn check_identities(&self) -> Result<(), HodgeError> {
        let n = self.n;
        for p in 0..=n {
            for q in 0..=n {
                if p < n && !self.del[p + 1][q].mul(&self.del[p][q])?.is_zero() {
                    return Err(HodgeError::NotADifferential {
                        identity: "∂∂ = 0",
                        bidegree: (p, q),
                    });
                }
                if q < n && !self.dbar[p][q + 1].mul(&self.dbar[p][q])?.is_zero() {
                    return Err(HodgeError::NotADifferential {
                        identity: "∂̄∂̄ = 0",
                        bidegree: (p, q),
                    });
                }
                if p < n && q < n {
                    let a = self.del[p][q + 1].mul(&self.dbar[p][q])?;
                    let b = self.dbar[p + 1][q].mul(&self.del[p][q])?;
                    let ok = a
                        .to_dense()
                        .iter()
                        .zip(b.to_dense())
                        .all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| (x + &y).is_zero()));
                    if !ok {
                        return Err(HodgeError::NotADifferential {
                            identity: "∂∂̄ + ∂̄∂ = 0",
                            bidegree: (p, q),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// ∂ : (p,q) → (p+1,q). Rows are empty when the target is out of range.
    pub fn del(&self, p: usize, q: usize) -> &Matrix {
        &self.del[p][q]
    }

    pub fn dbar(&self, p: usize, q: usize) -> &Matrix {
        &self.dbar[p][q]
    }

    /// ∂∂̄ : (p,q) → (p+1,q+1).
    pub fn ddbar(&self, p: usize, q: usize) -> &Matrix {
        &self.ddbar[p][q]
    }
}

/// A basis of harmonic forms for one theory in one degree.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    pub theory: Theory,
    pub degree: Degree,
    pub forms: Vec<Form>,
    pub space: Subspace,
}

impl HarmonicBasis {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }
}

/// Coordinates of a class in a harmonic basis, plus the harmonic representative.
#[derive(Clone, Debug)]
pub struct ClassCoordinates {
    pub coordinates: Vec<Scalar>,
    pub harmonic: Form,
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Scalar::is_zero)
    }
}

/// How harmonic spaces are computed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Route {
    /// Kernels of weighted conjugate-transposes.
    Adjoint,
    /// Conditions written with the conjugate-linear star, such as ∂∂̄∗α = 0.
    Star,
}

/// Hodge theory of a validated model with a fixed inner product.
pub struct Hodge {
    model: Model,
    ip: InnerProduct,
    ops: DerivationPair,
    star: Vec<Vec<Matrix>>,
    cache: Mutex<HashMap<(Theory, Degree, Route), Subspace>>,
}

impl Hodge {
    pub fn new(model: Model) -> Result<Self, HodgeError> {
        let ip = InnerProduct::orthonormal(&model);
        Hodge::with_inner_product(model, ip)
    }

    pub fn with_inner_product(model: Model, ip: InnerProduct) -> Result<Self, HodgeError> {
        let ops = DerivationPair::assemble(&model)?;
        let n = model.dim();
        let alg = model.algebra();
        let mut star = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let mut row = Vec::with_capacity(n + 1);
            for q in 0..=n {
                let mut cols = Vec::new();
                for m in model.basis(p, q) {
                    let comp = crate::algebra::Monomial(model.vol().0.iter().zip(&m.0).map(|(v, e)| v - e).collect());
                    let (neg, _) = alg.mul_monomials(m, &comp).expect("complement multiplies to vol");
                    let w = ip.weight(m);
                    let v = model.to_vec(&Form::term(comp, if neg { -w } else { w }), n - p, n - q)?;
                    cols.push(v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
                }
                row.push(Matrix::from_columns(model.basis_len(n - p, n - q), &cols)?);
            }
            star.push(row);
        }
        Ok(Hodge {
            model,
            ip,
            ops,
            star,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn n(&self) -> usize {
        self.model.dim()
    }

    pub fn inner_product(&self) -> &InnerProduct {
        &self.ip
    }

    pub fn ops(&self) -> &DerivationPair {
        &self.ops
    }

    pub fn weights(&self, p: usize, q: usize) -> Vec<Scalar> {
        self.ip.weights(&self.model, p, q)
    }

    // ---- total complex ----

    fn total_blocks(&self, k: usize) -> Vec<(usize, usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        let mut offset = 0;
        for p in k.saturating_sub(n)..=k.min(n) {
            out.push((p, k - p, offset));
            offset += self.model.basis_len(p, k - p);
        }
        out
    }

    pub fn total_len(&self, k: usize) -> usize {
        if k > 2 * self.n() {
            return 0;
        }
        self.total_blocks(k)
            .iter()
            .map(|&(p, q, _)| self.model.basis_len(p, q))
            .sum()
    }

    pub fn total_weights(&self, k: usize) -> Vec<Scalar> {
        if k > 2 * self.n() {
            return Vec::new();
        }
        self.total_blocks(k)
            .iter()
            .flat_map(|&(p, q, _)| self.weights(p, q))
            .collect()
    }

    pub fn total_to_vec(&self, f: &Form, k: usize) -> Result<Vec<Scalar>, HodgeError> {
        let mut v = vec![Scalar::zero(); self.total_len(k)];
        let alg = self.model.algebra();
        for (m, c) in f.terms() {
            let (p, q) = alg.bidegree(m);
            if p + q != k {
                return Err(HodgeError::NotHomogeneous);
            }
            let (_, _, off) = self
                .total_blocks(k)
                .into_iter()
                .find(|b| b.0 == p)
                .expect("block exists");
            let local = self.model.to_vec(&Form::term(m.clone(), c.clone()), p, q)?;
            for (i, x) in local.into_iter().enumerate() {
                if !x.is_zero() {
                    v[off + i] = x;
                }
            }
        }
        Ok(v)
    }

    pub fn total_from_vec(&self, k: usize, v: &[Scalar]) -> Form {
        let mut out = Form::zero(self.model.ngens());
        if k > 2 * self.n() {
            return out;
        }
        for (p, q, off) in self.total_blocks(k) {
            let len = self.model.basis_len(p, q);
            out = &out + &self.model.from_vec(p, q, &v[off..off + len]);
        }
        out
    }

    /// d : degree k → degree k+1 on the total complex.
    pub fn d_total(&self, k: usize) -> Result<Matrix, HodgeError> {
        let rows = self.total_len(k + 1);
        if k > 2 * self.n() {
            return Ok(Matrix::zeros(rows, 0));
        }
        let target: HashMap<usize, usize> = if k < 2 * self.n() {
            self.total_blocks(k + 1)
                .into_iter()
                .map(|(p, _, off)| (p, off))
                .collect()
        } else {
            HashMap::new()
        };
        let mut cols = Vec::new();
        for (p, q, _) in self.total_blocks(k) {
            let del = self.ops.del(p, q).transpose();
            let dbar = self.ops.dbar(p, q).transpose();
            for j in 0..self.model.basis_len(p, q) {
                let mut col: Vec<(usize, Scalar)> = Vec::new();
                if let Some(off) = target.get(&(p + 1)) {
                    col.extend(del.row(j).iter().map(|(r, v)| (r + off, v.clone())));
                }
                if let Some(off) = target.get(&p) {
                    col.extend(dbar.row(j).iter().map(|(r, v)| (r + off, v.clone())));
                }
                col.sort_by_key(|e| e.0);
                cols.push(col);
            }
        }
        Ok(Matrix::from_columns(rows, &cols)?)
    }

    /// Star on the total complex: degree k → degree 2n−k, as a matrix acting on conj(v).
    fn star_total(&self, k: usize) -> Result<Matrix, HodgeError> {
        let n = self.n();
        let rows = self.total_len(2 * n - k);
        let target: HashMap<usize, usize> = self
            .total_blocks(2 * n - k)
            .into_iter()
            .map(|(p, _, off)| (p, off))
            .collect();
        let mut cols = Vec::new();
        for (p, q, _) in self.total_blocks(k) {
            let s = self.star[p][q].transpose();
            let off = target[&(n - p)];
            for j in 0..self.model.basis_len(p, q) {
                cols.push(s.row(j).iter().map(|(r, v)| (r + off, v.clone())).collect());
            }
        }
        Ok(Matrix::from_columns(rows, &cols)?)
    }

    // ---- adjoints and star ----

    /// Full adjoint `W_V⁻¹ Dᴴ W_W` of `D : V → W` for the given weights.
    pub fn adjoint(d: &Matrix, wv: &[Scalar], ww: &[Scalar]) -> Result<Matrix, HodgeError> {
        let inv: Vec<Scalar> = wv.iter().map(Scalar::inv).collect();
        Ok(d.conj_transpose().scale_cols(ww)?.scale_rows(&inv)?)
    }

    /// Same kernel as the adjoint of `D`, without the domain weights.
    fn adjoint_kernel_rows(d: &Matrix, ww: &[Scalar]) -> Result<Matrix, HodgeError> {
        Ok(d.conj_transpose().scale_cols(ww)?)
    }

    pub fn star_matrix(&self, p: usize, q: usize) -> &Matrix {
        &self.star[p][q]
    }

    pub fn star(&self, a: &Form) -> Result<Form, HodgeError> {
        let n = self.n();
        let mut out = Form::zero(self.model.ngens());
        let alg = self.model.algebra();
        let mut degrees: Vec<(usize, usize)> = a.terms().map(|(m, _)| alg.bidegree(m)).collect();
        degrees.sort();
        degrees.dedup();
        for (p, q) in degrees {
            let mut part = Form::zero(self.model.ngens());
            for (m, c) in a.terms().filter(|(m, _)| alg.bidegree(m) == (p, q)) {
                part.add_term(m.clone(), c.clone());
            }
            let v: Vec<Scalar> = self.model.to_vec(&part, p, q)?.iter().map(Scalar::conj).collect();
            let img = self.star[p][q].mul_vec(&v)?;
            out = &out + &self.model.from_vec(n - p, n - q, &img);
        }
        Ok(out)
    }

    /// `g(a, b)` for forms of one bidegree.
    pub fn inner(&self, a: &Form, b: &Form, p: usize, q: usize) -> Result<Scalar, HodgeError> {
        let w = self.weights(p, q);
        Ok(crate::linalg::hermitian(
            &self.model.to_vec(a, p, q)?,
            &self.model.to_vec(b, p, q)?,
            &w,
        ))
    }

    // ---- harmonic spaces ----

    /// Every defining equation of the harmonic space with the matrix it applies.
    ///
    /// Adjoints are full adjoints, so a nonzero image is the actual value of the operator.
    pub fn harmonic_conditions(&self, theory: Theory, degree: Degree) -> Result<Vec<(Equation, Matrix)>, HodgeError> {
        self.check_degree(theory, degree)?;
        let o = &self.ops;
        let adj = |d: &Matrix, src: Vec<Scalar>, tgt: Vec<Scalar>| Self::adjoint(d, &src, &tgt);
        let mut out = Vec::new();
        match (theory, degree) {
            (Theory::Dolbeault, Degree::Bi(p, q)) => {
                out.push((Equation::Dbar, o.dbar(p, q).clone()));
                if q > 0 {
                    out.push((
                        Equation::DbarAdjoint,
                        adj(o.dbar(p, q - 1), self.weights(p, q - 1), self.weights(p, q))?,
                    ));
                }
            }
            (Theory::ConjDolbeault, Degree::Bi(p, q)) => {
                out.push((Equation::Del, o.del(p, q).clone()));
                if p > 0 {
                    out.push((
                        Equation::DelAdjoint,
                        adj(o.del(p - 1, q), self.weights(p - 1, q), self.weights(p, q))?,
                    ));
                }
            }
            (Theory::BottChern, Degree::Bi(p, q)) => {
                out.push((Equation::Del, o.del(p, q).clone()));
                out.push((Equation::Dbar, o.dbar(p, q).clone()));
                if p > 0 && q > 0 {
                    let w = self.weights(p - 1, q - 1);
                    out.push((
                        Equation::DdbarAdjoint,
                        adj(o.ddbar(p - 1, q - 1), w, self.weights(p, q))?,
                    ));
                }
            }
            (Theory::Aeppli, Degree::Bi(p, q)) => {
                out.push((Equation::Ddbar, o.ddbar(p, q).clone()));
                if p > 0 {
                    out.push((
                        Equation::DelAdjoint,
                        adj(o.del(p - 1, q), self.weights(p - 1, q), self.weights(p, q))?,
                    ));
                }
                if q > 0 {
                    out.push((
                        Equation::DbarAdjoint,
                        adj(o.dbar(p, q - 1), self.weights(p, q - 1), self.weights(p, q))?,
                    ));
                }
            }
            (Theory::DeRham, Degree::Total(k)) => {
                out.push((Equation::D, self.d_total(k)?));
                if k > 0 {
                    out.push((
                        Equation::DAdjoint,
                        adj(&self.d_total(k - 1)?, self.total_weights(k - 1), self.total_weights(k))?,
                    ));
                }
            }
            _ => return Err(HodgeError::BadDegree(degree, theory)),
        }
        Ok(out)
    }

    fn check_degree(&self, theory: Theory, degree: Degree) -> Result<(), HodgeError> {
        let n = self.n();
        let ok = match (theory, degree) {
            (Theory::DeRham, Degree::Total(k)) => k <= 2 * n,
            (Theory::DeRham, _) | (_, Degree::Total(_)) => false,
            (_, Degree::Bi(p, q)) => p <= n && q <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(HodgeError::BadDegree(degree, theory))
        }
    }

    fn kernel_of(&self, cols: usize, parts: &[Matrix]) -> Result<Subspace, HodgeError> {
        let refs: Vec<&Matrix> = parts.iter().collect();
        Ok(Matrix::vstack(cols, &refs)?.kernel())
    }

    /// Matrices whose joint kernel is the set of closed forms of the theory.
    fn closed_conditions(&self, theory: Theory, degree: Degree) -> Result<Vec<Matrix>, HodgeError> {
        let o = &self.ops;
        Ok(match (theory, degree) {
            (Theory::Dolbeault, Degree::Bi(p, q)) => vec![o.dbar(p, q).clone()],
            (Theory::ConjDolbeault, Degree::Bi(p, q)) => vec![o.del(p, q).clone()],
            (Theory::BottChern, Degree::Bi(p, q)) => vec![o.del(p, q).clone(), o.dbar(p, q).clone()],
            (Theory::Aeppli, Degree::Bi(p, q)) => vec![o.ddbar(p, q).clone()],
            (Theory::DeRham, Degree::Total(k)) => vec![self.d_total(k)?],
            _ => return Err(HodgeError::BadDegree(degree, theory)),
        })
    }

    fn degree_len(&self, degree: Degree) -> usize {
        match degree {
            Degree::Bi(p, q) => self.model.basis_len(p, q),
            Degree::Total(k) => self.total_len(k),
        }
    }

    fn compute_space(&self, theory: Theory, degree: Degree, route: Route) -> Result<Subspace, HodgeError> {
        let n = self.n();
        let o = &self.ops;
        let len = self.degree_len(degree);
        let mut parts = self.closed_conditions(theory, degree)?;
        match route {
            Route::Adjoint => {
                match (theory, degree) {
                    (Theory::Dolbeault, Degree::Bi(p, q)) if q > 0 => {
                        parts.push(Self::adjoint_kernel_rows(o.dbar(p, q - 1), &self.weights(p, q))?)
                    }
                    (Theory::ConjDolbeault, Degree::Bi(p, q)) if p > 0 => {
                        parts.push(Self::adjoint_kernel_rows(o.del(p - 1, q), &self.weights(p, q))?)
                    }
                    (Theory::BottChern, Degree::Bi(p, q)) if p > 0 && q > 0 => {
                        parts.push(Self::adjoint_kernel_rows(o.ddbar(p - 1, q - 1), &self.weights(p, q))?)
                    }
                    (Theory::Aeppli, Degree::Bi(p, q)) => {
                        let w = self.weights(p, q);
                        if p > 0 {
                            parts.push(Self::adjoint_kernel_rows(o.del(p - 1, q), &w)?);
                        }
                        if q > 0 {
                            parts.push(Self::adjoint_kernel_rows(o.dbar(p, q - 1), &w)?);
                        }
                    }
                    (Theory::DeRham, Degree::Total(k)) if k > 0 => parts.push(Self::adjoint_kernel_rows(
                        &self.d_total(k - 1)?,
                        &self.total_weights(k),
                    )?),
                    _ => {}
                }
                self.kernel_of(len, &parts)
            }
            Route::Star => {
                let linear = self.kernel_of(len, &parts)?;
                let starred: Vec<Matrix> = match (theory, degree) {
                    // the star is conjugate-linear, so ∂̄* = -∗∂̄∗ and ∂* = -∗∂∗
                    (Theory::Dolbeault, Degree::Bi(p, q)) => vec![o.dbar(n - p, n - q).mul(&self.star[p][q])?],
                    (Theory::ConjDolbeault, Degree::Bi(p, q)) => vec![o.del(n - p, n - q).mul(&self.star[p][q])?],
                    (Theory::BottChern, Degree::Bi(p, q)) => vec![o.ddbar(n - p, n - q).mul(&self.star[p][q])?],
                    (Theory::Aeppli, Degree::Bi(p, q)) => vec![
                        o.del(n - p, n - q).mul(&self.star[p][q])?,
                        o.dbar(n - p, n - q).mul(&self.star[p][q])?,
                    ],
                    (Theory::DeRham, Degree::Total(k)) => vec![self.d_total(2 * n - k)?.mul(&self.star_total(k)?)?],
                    _ => return Err(HodgeError::BadDegree(degree, theory)),
                };
                // {α : M ∗α = 0} = conj(ker(M S)) because ∗α = S conj(α)
                let conj_linear = self.kernel_of(len, &starred)?.conj();
                Ok(linear.intersection(&conj_linear)?)
            }
        }
    }

    pub fn harmonic_subspace(&self, theory: Theory, degree: Degree, route: Route) -> Result<Subspace, HodgeError> {
        self.check_degree(theory, degree)?;
        let key = (theory, degree, route);
        if let Some(s) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(s.clone());
        }
        let s = self.compute_space(theory, degree, route)?;
        self.cache.lock().expect("cache lock").insert(key, s.clone());
        Ok(s)
    }

    pub fn harmonic_space(&self, theory: Theory, degree: Degree) -> Result<HarmonicBasis, HodgeError> {
        let space = self.harmonic_subspace(theory, degree, Route::Adjoint)?;
        let forms = space.basis().iter().map(|v| self.vec_to_form(degree, v)).collect();
        Ok(HarmonicBasis {
            theory,
            degree,
            forms,
            space,
        })
    }

    pub fn harmonic(&self, theory: Theory, p: usize, q: usize) -> Result<HarmonicBasis, HodgeError> {
        self.harmonic_space(theory, Degree::Bi(p, q))
    }

    pub fn vec_to_form(&self, degree: Degree, v: &[Scalar]) -> Form {
        match degree {
            Degree::Bi(p, q) => self.model.from_vec(p, q, v),
            Degree::Total(k) => self.total_from_vec(k, v),
        }
    }

    pub fn form_to_vec(&self, degree: Degree, f: &Form) -> Result<Vec<Scalar>, HodgeError> {
        match degree {
            Degree::Bi(p, q) => Ok(self.model.to_vec(f, p, q)?),
            Degree::Total(k) => self.total_to_vec(f, k),
        }
    }

    /// Whether `f` satisfies every defining equation of the theory's harmonic space.
    pub fn is_harmonic(&self, theory: Theory, degree: Degree, f: &Form) -> Result<bool, HodgeError> {
        let s = self.harmonic_subspace(theory, degree, Route::Adjoint)?;
        Ok(s.contains(&self.form_to_vec(degree, f)?)?)
    }

    // ---- cohomology oracle ----

    /// Quotient dimension computed from ranks alone, with no inner product.
    pub fn cohomology_dim(&self, theory: Theory, degree: Degree) -> Result<usize, HodgeError> {
        self.check_degree(theory, degree)?;
        let o = &self.ops;
        let len = self.degree_len(degree);
        let closed =
            len - Matrix::vstack(len, &self.closed_conditions(theory, degree)?.iter().collect::<Vec<_>>())?.rank();
        let exact = match (theory, degree) {
            (Theory::Dolbeault, Degree::Bi(p, q)) if q > 0 => o.dbar(p, q - 1).rank(),
            (Theory::ConjDolbeault, Degree::Bi(p, q)) if p > 0 => o.del(p - 1, q).rank(),
            (Theory::BottChern, Degree::Bi(p, q)) if p > 0 && q > 0 => o.ddbar(p - 1, q - 1).rank(),
            (Theory::Aeppli, Degree::Bi(p, q)) => {
                let mut parts = Vec::new();
                if p > 0 {
                    parts.push(o.del(p - 1, q));
                }
                if q > 0 {
                    parts.push(o.dbar(p, q - 1));
                }
                if parts.is_empty() {
                    0
                } else {
                    Matrix::hstack(len, &parts)?.rank()
                }
            }
            (Theory::DeRham, Degree::Total(k)) if k > 0 => self.d_total(k - 1)?.rank(),
            _ => 0,
        };
        Ok(closed - exact)
    }

    /// Matrix whose column space is the exact subspace of the theory in `degree`.
    pub fn exact_matrix(&self, theory: Theory, degree: Degree) -> Result<Matrix, HodgeError> {
        let o = &self.ops;
        let len = self.degree_len(degree);
        Ok(match (theory, degree) {
            (Theory::Dolbeault, Degree::Bi(p, q)) if q > 0 => o.dbar(p, q - 1).clone(),
            (Theory::ConjDolbeault, Degree::Bi(p, q)) if p > 0 => o.del(p - 1, q).clone(),
            (Theory::BottChern, Degree::Bi(p, q)) if p > 0 && q > 0 => o.ddbar(p - 1, q - 1).clone(),
            (Theory::Aeppli, Degree::Bi(p, q)) => {
                let mut parts = vec![];
                if p > 0 {
                    parts.push(o.del(p - 1, q));
                }
                if q > 0 {
                    parts.push(o.dbar(p, q - 1));
                }
                if parts.is_empty() {
                    Matrix::zeros(len, 0)
                } else {
                    Matrix::hstack(len, &parts)?
                }
            }
            (Theory::DeRham, Degree::Total(k)) if k > 0 => self.d_total(k - 1)?,
            _ => Matrix::zeros(len, 0),
        })
    }

    pub fn is_closed(&self, theory: Theory, degree: Degree, f: &Form) -> Result<bool, HodgeError> {
        let v = self.form_to_vec(degree, f)?;
        for m in self.closed_conditions(theory, degree)? {
            if m.mul_vec(&v)?.iter().any(|x| !x.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_exact(&self, theory: Theory, degree: Degree, f: &Form) -> Result<bool, HodgeError> {
        let v = self.form_to_vec(degree, f)?;
        Ok(self.exact_matrix(theory, degree)?.solve(&v)?.is_some())
    }

    pub fn degree_weights(&self, degree: Degree) -> Vec<Scalar> {
        match degree {
            Degree::Bi(p, q) => self.weights(p, q),
            Degree::Total(k) => self.total_weights(k),
        }
    }

    /// Harmonic part of a closed form, with coordinates in [`Hodge::harmonic_space`].
    pub fn class_of(&self, f: &Form, theory: Theory, degree: Degree) -> Result<ClassCoordinates, HodgeError> {
        self.check_degree(theory, degree)?;
        if !self.is_closed(theory, degree, f)? {
            let condition = match theory {
                Theory::Dolbeault => "∂̄-closed",
                Theory::ConjDolbeault => "∂-closed",
                Theory::BottChern | Theory::DeRham => "d-closed",
                Theory::Aeppli => "∂∂̄-closed",
            };
            return Err(HodgeError::NotClosed { theory, condition });
        }
        let v = self.form_to_vec(degree, f)?;
        let h = self.harmonic_subspace(theory, degree, Route::Adjoint)?;
        let proj = h.project(&v, &self.degree_weights(degree))?;
        let residual: Vec<Scalar> = v.iter().zip(&proj).map(|(a, b)| a - b).collect();
        if self.exact_matrix(theory, degree)?.solve(&residual)?.is_none() {
            return Err(HodgeError::Invariant(format!(
                "{theory} residual of a closed form is not exact"
            )));
        }
        let coordinates = h
            .coordinates(&proj)?
            .ok_or_else(|| HodgeError::Invariant("projection left the harmonic space".into()))?;
        Ok(ClassCoordinates {
            coordinates,
            harmonic: self.vec_to_form(degree, &proj),
        })
    }

    pub fn table(&self) -> Result<CohomologyTable, HodgeError> {
        CohomologyTable::from_oracle(self)
    }
}
