//! Monomials and forms in a truncated graded-commutative algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::linalg::Scalar;

/// Exponent vector over the generators in canonical order.
///
/// Monomials sort by *descending* lexicographic order on exponents, so a monomial
/// containing generator 0 precedes one that does not.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, g: usize) -> Self {
        let mut e = vec![0; ngens];
        e[g] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Generator indices with multiplicity, in canonical order.
    pub fn factors(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(g, &e)| std::iter::repeat_n(g, e as usize))
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite linear combination of monomials with Gaussian rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    ngens: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Form {
    pub fn zero(ngens: usize) -> Self {
        Form {
            ngens,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ngens: usize, c: Scalar) -> Self {
        Form::term(Monomial::unit(ngens), c)
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut f = Form::zero(m.0.len());
        f.add_term(m, c);
        f
    }

    pub fn generator(ngens: usize, g: usize) -> Self {
        Form::term(Monomial::generator(ngens, g), Scalar::one())
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.0.len(), self.ngens);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        if c.is_zero() {
            return Form::zero(self.ngens);
        }
        Form {
            ngens: self.ngens,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// The unique scalar `c` with `self == c * other`, if one exists.
    pub fn ratio_to(&self, other: &Form) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let (m, v) = other.terms.iter().next()?;
        let c = &self.coefficient(m) / v;
        (other.scale(&c) == *self).then_some(c)
    }
}

impl<'a> Add<&'a Form> for &'a Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(&-Scalar::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_earlier_generators_first() {
        let a = Monomial(vec![1, 0, 1]);
        let b = Monomial(vec![0, 1, 1]);
        let c = Monomial(vec![1, 1, 0]);
        let mut v = vec![b.clone(), a.clone(), c.clone()];
        v.sort();
        assert_eq!(v, vec![c, a, b]);
    }

    #[test]
    fn cancellation_removes_terms() {
        let m = Monomial(vec![1, 0]);
        let mut f = Form::term(m.clone(), Scalar::gaussian(1, 1));
        f.add_term(m, Scalar::gaussian(-1, -1));
        assert!(f.is_zero());
    }

    #[test]
    fn ratio() {
        let f = &Form::generator(2, 0) + &Form::generator(2, 1).scale(&Scalar::i());
        let g = f.scale(&Scalar::gaussian(2, -3));
        assert_eq!(g.ratio_to(&f), Some(Scalar::gaussian(2, -3)));
        assert_eq!(Form::generator(2, 0).ratio_to(&f), None);
    }
}
