use crate::algebra::{AlgebraError, Model, Monomial};
use crate::linalg::Scalar;

/// Diagonal Hermitian product in the monomial basis.
///
/// Weights are multiplicative over generators, so `w(m) * w(m^c)` is the same for
/// every monomial and the star operator is an isometry up to a constant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InnerProduct {
    generator_weights: Vec<Scalar>,
}

impl InnerProduct {
    /// Every monomial has norm 1.
    pub fn orthonormal(model: &Model) -> Self {
        InnerProduct {
            generator_weights: vec![Scalar::one(); model.ngens()],
        }
    }

    /// `|g|² = weights[g]`; weights must be positive rationals, equal on conjugate pairs.
    pub fn from_generator_weights(model: &Model, weights: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if weights.len() != model.ngens() {
            return Err(AlgebraError::InvalidModel(format!(
                "{} weights for {} generators",
                weights.len(),
                model.ngens()
            )));
        }
        for (g, w) in model.algebra().generators().iter().zip(&weights) {
            let positive = w.is_real() && *w.re() > num_rational::BigRational::from_integer(0.into());
            if !positive {
                return Err(AlgebraError::InvalidModel(format!(
                    "weight of {} must be a positive rational",
                    g.name
                )));
            }
            if weights[g.conjugate] != *w {
                return Err(AlgebraError::InvalidModel(format!(
                    "weight of {} differs from its conjugate",
                    g.name
                )));
            }
        }
        Ok(InnerProduct {
            generator_weights: weights,
        })
    }

    pub fn weight(&self, m: &Monomial) -> Scalar {
        m.0.iter().zip(&self.generator_weights).fold(
            Scalar::one(),
            |acc, (&e, w)| if e == 0 { acc } else { &acc * &w.pow(e) },
        )
    }

    pub fn weights(&self, model: &Model, p: usize, q: usize) -> Vec<Scalar> {
        model.basis(p, q).iter().map(|m| self.weight(m)).collect()
    }
}
