//! Finite-dimensional subspaces of `Q(i)^n`, stored by their canonical basis.

use super::matrix::{densify, Matrix};
use super::scalar::Scalar;
use super::LinalgError;

/// A subspace with its reduced row echelon basis (pivot entries equal to 1).
///
/// The basis is canonical, so two subspaces are equal exactly when their
/// `Subspace` values compare equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

/// `<x, y> = sum_k w_k x_k conj(y_k)`.
pub fn hermitian(x: &[Scalar], y: &[Scalar], weights: &[Scalar]) -> Scalar {
    x.iter()
        .zip(y)
        .zip(weights)
        .filter(|((a, b), _)| !a.is_zero() && !b.is_zero())
        .map(|((a, b), w)| &(a * &b.conj()) * w)
        .sum()
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_rref(ambient, Matrix::identity(ambient).rref_rows())
    }

    fn from_rref(ambient: usize, rows: Vec<Vec<(usize, Scalar)>>) -> Self {
        let pivots = rows.iter().map(|r| r[0].0).collect();
        let basis = rows.iter().map(|r| densify(r, ambient)).collect();
        Subspace { ambient, basis, pivots }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        for v in vectors {
            if v.len() != ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient));
        }
        let m = Matrix::from_dense(vectors.len(), ambient, vectors.to_vec())?;
        Ok(Subspace::from_rref(ambient, m.rref_rows()))
    }

    pub(crate) fn from_independent(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        Subspace::span(ambient, &vectors).expect("vectors sized to ambient")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    fn check(&self, v: &[Scalar]) -> Result<(), LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in [`Subspace::basis`], or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        self.check(v)?;
        let mut r = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if !c.is_zero() {
                for (x, y) in r.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= &(&c * y);
                    }
                }
            }
            coords.push(c);
        }
        Ok(if r.iter().all(Scalar::is_zero) {
            Some(coords)
        } else {
            None
        })
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, LinalgError> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if other.ambient != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|b| b.iter().map(|x| -x).collect()));
        let m = Matrix::from_column_vectors(self.ambient, &cols)?;
        let k = self.dim();
        let vecs: Vec<Vec<Scalar>> = m
            .kernel_vectors()
            .into_iter()
            .map(|c| combine(&self.basis, &c[..k], self.ambient))
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Entrywise complex conjugate of every vector in the subspace.
    pub fn conj(&self) -> Subspace {
        Subspace {
            ambient: self.ambient,
            basis: self
                .basis
                .iter()
                .map(|b| b.iter().map(Scalar::conj).collect())
                .collect(),
            pivots: self.pivots.clone(),
        }
    }

    /// Orthogonal projection of `v` for the weighted Hermitian product.
    pub fn project(&self, v: &[Scalar], weights: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        self.check(v)?;
        self.check(weights)?;
        if self.is_zero() {
            return Ok(vec![Scalar::zero(); self.ambient]);
        }
        let k = self.dim();
        let gram: Vec<Vec<Scalar>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| hermitian(&self.basis[j], &self.basis[i], weights))
                    .collect()
            })
            .collect();
        let rhs: Vec<Scalar> = (0..k).map(|i| hermitian(v, &self.basis[i], weights)).collect();
        let g = Matrix::from_dense(k, k, gram)?;
        let c = g.solve(&rhs)?.expect("Gram matrix of a basis is invertible");
        Ok(combine(&self.basis, &c, self.ambient))
    }
}

/// `sum_i c_i * vectors_i`.
pub fn combine(vectors: &[Vec<Scalar>], coeffs: &[Scalar], len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += &(c * x);
            }
        }
    }
    out
}
