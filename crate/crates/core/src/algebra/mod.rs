//! Bigraded truncated algebras with a conjugation and two anticommuting differentials.

mod form;
mod model;

pub use form::{Form, Monomial};
pub use model::{DiagonalAction, Generator, GradedAlgebra, Model, ModelSpec, Operator, Parity};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("conjugation is inconsistent at generator `{generator}`")]
    ConjugationMismatch { generator: String },
    #[error("{operator:?} of `{generator}` must have bidegree {expected:?}")]
    BidegreeMismatch {
        generator: String,
        operator: Operator,
        expected: (usize, usize),
    },
    #[error("d² ≠ 0: {identity} does not vanish on `{generator}`")]
    NotADifferential { generator: String, identity: &'static str },
    #[error("differential does not preserve the truncation of `{generator}`")]
    TruncationNotClosed { generator: String },
    #[error("expected exactly one monomial of top bidegree, found {count}")]
    NoVolumeForm { count: usize },
    #[error("monomial {monomial} has no complementary monomial")]
    NoComplement { monomial: String },
    #[error("action is not compatible with the differential at `{generator}`")]
    NotEquivariant { generator: String },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("form belongs to a different model ({found} generators, expected {expected})")]
    ModelMismatch { expected: usize, found: usize },
    #[error("expected bidegree {expected:?}, found a term of bidegree {found:?}")]
    WrongBidegree {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("monomial {monomial} is not in the model basis")]
    NotInBasis { monomial: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}
