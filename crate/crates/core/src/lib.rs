//! Exact cohomology of bigraded models of nilmanifolds and related compact complex
//! manifolds, with harmonic representatives, formality checks and Massey products.
//!
//! Everything is computed over the Gaussian rationals, so every answer is exact.

pub mod algebra;
pub mod catalog;
pub mod formality;
pub mod hodge;
pub mod linalg;
pub mod massey;
pub mod notation;
pub mod obstruction;

pub use algebra::{AlgebraError, Form, Model};
pub use catalog::{CatalogError, DslError};
pub use formality::{check_formality, FormalityReport, Notion};
pub use hodge::{CohomologyTable, Degree, Hodge, HodgeError, Theory};
pub use linalg::{LinalgError, Matrix, Scalar, Subspace};
pub use massey::MasseyError;
pub use obstruction::{DimTable, ObstructionError};

/// Any error the library can report.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Massey(#[from] MasseyError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
}

impl Error {
    /// True when a self-check failed, which points at a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Hodge(HodgeError::Invariant(_)) | Error::Massey(MasseyError::Hodge(HodgeError::Invariant(_)))
        )
    }
}
