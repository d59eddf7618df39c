//! Exact linear algebra over the Gaussian rationals.

mod gauss;
mod matrix;
mod scalar;
mod subspace;

pub use matrix::{Matrix, SparseRow};
pub use scalar::{ParseScalarError, Scalar};
pub use subspace::{combine, hermitian, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Minimum-norm solution of `m * x = b` for the weighted product on the domain.
///
/// Returns `None` when the system is inconsistent.
pub fn solve_min_norm(m: &Matrix, b: &[Scalar], weights: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    let Some(x0) = m.solve(b)? else { return Ok(None) };
    let ker = m.kernel();
    let p = ker.project(&x0, weights)?;
    Ok(Some(x0.iter().zip(&p).map(|(a, b)| a - b).collect()))
}
