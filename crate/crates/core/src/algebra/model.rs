//! Generators, model specifications and validated models.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::form::{Form, Monomial};
use super::AlgebraError;
use crate::linalg::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub name: String,
    pub bidegree: (usize, usize),
    pub parity: Parity,
    /// Smallest exponent at which the generator's power vanishes (2 for odd generators).
    pub truncation: u32,
    /// Index of the conjugate generator; equal to the own index for real generators.
    pub conjugate: usize,
}

/// The free truncated bigraded-commutative algebra on a list of generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedAlgebra {
    generators: Vec<Generator>,
}

impl GradedAlgebra {
    pub fn new(generators: Vec<Generator>) -> Result<Self, AlgebraError> {
        let n = generators.len();
        for (k, g) in generators.iter().enumerate() {
            let bad = |reason: &str| AlgebraError::InvalidGenerator {
                name: g.name.clone(),
                reason: reason.to_string(),
            };
            let total = g.bidegree.0 + g.bidegree.1;
            if total == 0 {
                return Err(bad("bidegree (0,0) is not allowed"));
            }
            match g.parity {
                Parity::Odd if total % 2 == 0 => return Err(bad("odd generator needs odd total degree")),
                Parity::Even if total % 2 == 1 => return Err(bad("even generator needs even total degree")),
                Parity::Odd if g.truncation != 2 => {
                    return Err(bad("odd generators square to zero, truncation must be 2"))
                }
                Parity::Even if g.truncation < 2 => return Err(bad("truncation must be at least 2")),
                _ => {}
            }
            if g.conjugate >= n {
                return Err(bad("conjugate index out of range"));
            }
            let c = &generators[g.conjugate];
            if c.conjugate != k
                || c.bidegree != (g.bidegree.1, g.bidegree.0)
                || c.parity != g.parity
                || c.truncation != g.truncation
            {
                return Err(AlgebraError::ConjugationMismatch {
                    generator: g.name.clone(),
                });
            }
            if generators[..k].iter().any(|h| h.name == g.name) {
                return Err(bad("duplicate generator name"));
            }
        }
        Ok(GradedAlgebra { generators })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn bidegree(&self, m: &Monomial) -> (usize, usize) {
        m.0.iter().zip(&self.generators).fold((0, 0), |(p, q), (&e, g)| {
            (p + e as usize * g.bidegree.0, q + e as usize * g.bidegree.1)
        })
    }

    pub fn is_odd(&self, m: &Monomial) -> bool {
        m.0.iter()
            .zip(&self.generators)
            .filter(|(_, g)| g.parity == Parity::Odd)
            .map(|(&e, _)| e)
            .sum::<u32>()
            % 2
            == 1
    }

    /// `a * b = sign * m`; `None` when the product vanishes.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let mut exps = Vec::with_capacity(a.0.len());
        for ((x, y), g) in a.0.iter().zip(&b.0).zip(&self.generators) {
            let e = x + y;
            if e >= g.truncation {
                return None;
            }
            exps.push(e);
        }
        // Koszul sign: odd factors of b moving left past later odd factors of a
        let mut swaps = 0u32;
        let mut odd_in_a_after = 0u32;
        for j in (0..self.generators.len()).rev() {
            if self.generators[j].parity != Parity::Odd {
                continue;
            }
            if b.0[j] == 1 {
                swaps += odd_in_a_after;
            }
            odd_in_a_after += a.0[j];
        }
        Some((swaps % 2 == 1, Monomial(exps)))
    }

    fn check_len(&self, f: &Form) -> Result<(), AlgebraError> {
        if f.ngens() != self.ngens() {
            return Err(AlgebraError::ModelMismatch {
                expected: self.ngens(),
                found: f.ngens(),
            });
        }
        Ok(())
    }

    pub fn wedge(&self, a: &Form, b: &Form) -> Result<Form, AlgebraError> {
        self.check_len(a)?;
        self.check_len(b)?;
        let mut out = Form::zero(self.ngens());
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((neg, m)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn power(&self, a: &Form, k: u32) -> Result<Form, AlgebraError> {
        let mut acc = Form::constant(self.ngens(), Scalar::one());
        for _ in 0..k {
            acc = self.wedge(&acc, a)?;
        }
        Ok(acc)
    }

    /// Conjugate of a monomial: the product of the conjugate generators in factor order.
    pub fn conj_monomial(&self, m: &Monomial) -> Option<(bool, Monomial)> {
        let n = self.ngens();
        let mut acc = Monomial::unit(n);
        let mut neg = false;
        for g in m.factors() {
            let c = Monomial::generator(n, self.generators[g].conjugate);
            let (s, next) = self.mul_monomials(&acc, &c)?;
            neg ^= s;
            acc = next;
        }
        Some((neg, acc))
    }

    pub fn conj(&self, f: &Form) -> Result<Form, AlgebraError> {
        self.check_len(f)?;
        let mut out = Form::zero(self.ngens());
        for (m, c) in f.terms() {
            if let Some((neg, cm)) = self.conj_monomial(m) {
                let c = c.conj();
                out.add_term(cm, if neg { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Bidegree shared by every term, or `None` for zero and mixed forms.
    pub fn bidegree_of(&self, f: &Form) -> Option<(usize, usize)> {
        let mut it = f.terms().map(|(m, _)| self.bidegree(m));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Every nonzero monomial with bidegree at most `(n, n)`.
    pub fn monomials_up_to(&self, n: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.ngens()];
        self.enumerate(0, (0, 0), n, &mut cur, &mut out);
        out
    }

    fn enumerate(&self, k: usize, deg: (usize, usize), n: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if k == self.ngens() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let g = &self.generators[k];
        for e in 0..g.truncation {
            let d = (deg.0 + e as usize * g.bidegree.0, deg.1 + e as usize * g.bidegree.1);
            if d.0 > n || d.1 > n {
                break;
            }
            cur[k] = e;
            self.enumerate(k + 1, d, n, cur, out);
        }
        cur[k] = 0;
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Operator {
    #[serde(rename = "del")]
    Del,
    #[serde(rename = "dbar")]
    Dbar,
}

/// Unvalidated description of a bigraded model.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelSpec {
    pub name: String,
    /// Complex dimension `n`.
    pub dim: usize,
    pub algebra: GradedAlgebra,
    /// `del[g]` is the value of ∂ on generator `g`.
    pub del: Vec<Form>,
    pub dbar: Vec<Form>,
    pub params: BTreeMap<String, Scalar>,
}

/// Finite-order diagonal action on generators by `±1, ±i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagonalAction {
    pub weights: Vec<Scalar>,
}

impl DiagonalAction {
    pub fn weight(&self, m: &Monomial) -> Scalar {
        m.0.iter()
            .zip(&self.weights)
            .fold(Scalar::one(), |acc, (&e, w)| &acc * &w.pow(e))
    }

    fn validate(&self, algebra: &GradedAlgebra) -> Result<(), AlgebraError> {
        if self.weights.len() != algebra.ngens() {
            return Err(AlgebraError::InvalidAction(format!(
                "{} weights for {} generators",
                self.weights.len(),
                algebra.ngens()
            )));
        }
        for (g, w) in algebra.generators().iter().zip(&self.weights) {
            if !w.is_unit_root() {
                return Err(AlgebraError::InvalidAction(format!(
                    "weight {w} on {} is not one of 1, -1, i, -i",
                    g.name
                )));
            }
            if self.weights[g.conjugate] != w.conj() {
                return Err(AlgebraError::InvalidAction(format!(
                    "weight on {} does not commute with conjugation",
                    g.name
                )));
            }
        }
        Ok(())
    }
}

/// A validated model together with the monomial basis it works in.
#[derive(Clone, Debug)]
pub struct Model {
    spec: ModelSpec,
    action: Option<DiagonalAction>,
    basis: Vec<Vec<Vec<Monomial>>>,
    index: HashMap<Monomial, usize>,
    vol: Monomial,
}

impl Model {
    pub fn new(spec: ModelSpec) -> Result<Self, AlgebraError> {
        Model::build(spec, None)
    }

    /// The subalgebra of monomials fixed by `action`.
    pub fn invariant(spec: ModelSpec, action: DiagonalAction) -> Result<Self, AlgebraError> {
        Model::build(spec, Some(action))
    }

    fn build(spec: ModelSpec, action: Option<DiagonalAction>) -> Result<Self, AlgebraError> {
        let alg = &spec.algebra;
        let n = spec.dim;
        let k = alg.ngens();
        if n == 0 {
            return Err(AlgebraError::InvalidModel("complex dimension must be positive".into()));
        }
        if spec.del.len() != k || spec.dbar.len() != k {
            return Err(AlgebraError::InvalidModel(
                "one ∂ and one ∂̄ value per generator required".into(),
            ));
        }
        for f in spec.del.iter().chain(&spec.dbar) {
            alg.check_len(f)?;
        }
        let model_shell = |spec: &ModelSpec| Model {
            spec: spec.clone(),
            action: None,
            basis: Vec::new(),
            index: HashMap::new(),
            vol: Monomial::unit(k),
        };
        let shell = model_shell(&spec);

        for (g, gen) in alg.generators().iter().enumerate() {
            let (p, q) = gen.bidegree;
            if p > n || q > n {
                return Err(AlgebraError::InvalidGenerator {
                    name: gen.name.clone(),
                    reason: format!("bidegree exceeds ({n},{n})"),
                });
            }
            for (op, f, want) in [
                (Operator::Del, &spec.del[g], (p + 1, q)),
                (Operator::Dbar, &spec.dbar[g], (p, q + 1)),
            ] {
                if f.terms().any(|(m, _)| alg.bidegree(m) != want) {
                    return Err(AlgebraError::BidegreeMismatch {
                        generator: gen.name.clone(),
                        operator: op,
                        expected: want,
                    });
                }
            }
            // conj(∂g) = ∂̄(conj g)
            let c = gen.conjugate;
            if alg.conj(&spec.del[g])? != spec.dbar[c] {
                return Err(AlgebraError::ConjugationMismatch {
                    generator: gen.name.clone(),
                });
            }
            let x = Form::generator(k, g);
            let dd = shell.del(&shell.del(&x)?)?;
            let bb = shell.dbar(&shell.dbar(&x)?)?;
            let mixed = &shell.del(&shell.dbar(&x)?)? + &shell.dbar(&shell.del(&x)?)?;
            for (f, identity) in [(dd, "∂∂"), (bb, "∂̄∂̄"), (mixed, "∂∂̄+∂̄∂")] {
                if !f.is_zero() {
                    return Err(AlgebraError::NotADifferential {
                        generator: gen.name.clone(),
                        identity,
                    });
                }
            }
            if gen.parity == Parity::Even {
                let top = alg.power(&x, gen.truncation - 1)?;
                for f in [&spec.del[g], &spec.dbar[g]] {
                    if !alg.wedge(&top, f)?.is_zero() {
                        return Err(AlgebraError::TruncationNotClosed {
                            generator: gen.name.clone(),
                        });
                    }
                }
            }
        }

        if let Some(a) = &action {
            a.validate(alg)?;
            for (g, gen) in alg.generators().iter().enumerate() {
                let wg = &a.weights[g];
                let bad = spec.del[g]
                    .terms()
                    .chain(spec.dbar[g].terms())
                    .any(|(m, _)| a.weight(m) != *wg);
                if bad {
                    return Err(AlgebraError::NotEquivariant {
                        generator: gen.name.clone(),
                    });
                }
            }
        }

        let mut basis = vec![vec![Vec::new(); n + 1]; n + 1];
        for m in alg.monomials_up_to(n) {
            if let Some(a) = &action {
                if !a.weight(&m).is_one() {
                    continue;
                }
            }
            let (p, q) = alg.bidegree(&m);
            basis[p][q].push(m);
        }
        let mut index = HashMap::new();
        for row in &mut basis {
            for cell in row.iter_mut() {
                cell.sort();
                for (i, m) in cell.iter().enumerate() {
                    index.insert(m.clone(), i);
                }
            }
        }
        if basis[n][n].len() != 1 {
            return Err(AlgebraError::NoVolumeForm {
                count: basis[n][n].len(),
            });
        }
        let vol = basis[n][n][0].clone();
        for m in index.keys() {
            let comp: Option<Vec<u32>> = vol.0.iter().zip(&m.0).map(|(v, e)| v.checked_sub(*e)).collect();
            match comp.map(Monomial) {
                Some(c) if index.contains_key(&c) => {}
                _ => {
                    return Err(AlgebraError::NoComplement {
                        monomial: format!("{:?}", m.0),
                    })
                }
            }
        }

        Ok(Model {
            spec,
            action,
            basis,
            index,
            vol,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.spec.algebra
    }

    pub fn ngens(&self) -> usize {
        self.spec.algebra.ngens()
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn action(&self) -> Option<&DiagonalAction> {
        self.action.as_ref()
    }

    pub fn basis(&self, p: usize, q: usize) -> &[Monomial] {
        if p > self.dim() || q > self.dim() {
            return &[];
        }
        &self.basis[p][q]
    }

    pub fn basis_len(&self, p: usize, q: usize) -> usize {
        self.basis(p, q).len()
    }

    pub fn vol(&self) -> &Monomial {
        &self.vol
    }

    pub fn vol_form(&self) -> Form {
        Form::term(self.vol.clone(), Scalar::one())
    }

    pub fn generator(&self, name: &str) -> Result<Form, AlgebraError> {
        let g = self
            .algebra()
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
        Ok(Form::generator(self.ngens(), g))
    }

    pub fn wedge(&self, a: &Form, b: &Form) -> Result<Form, AlgebraError> {
        self.algebra().wedge(a, b)
    }

    pub fn conj(&self, f: &Form) -> Result<Form, AlgebraError> {
        self.algebra().conj(f)
    }

    fn derive(&self, values: &[Form], f: &Form) -> Result<Form, AlgebraError> {
        let alg = self.algebra();
        alg.check_len(f)?;
        let k = self.ngens();
        let mut out = Form::zero(k);
        for (m, c) in f.terms() {
            let factors = m.factors();
            let mut prefix = vec![0u32; k];
            let mut odd_prefix = false;
            for (pos, &g) in factors.iter().enumerate() {
                let mut suffix = vec![0u32; k];
                for &h in &factors[pos + 1..] {
                    suffix[h] += 1;
                }
                if !values[g].is_zero() {
                    let left = Form::term(Monomial(prefix.clone()), if odd_prefix { -c } else { c.clone() });
                    let t = alg.wedge(
                        &alg.wedge(&left, &values[g])?,
                        &Form::term(Monomial(suffix), Scalar::one()),
                    )?;
                    out = &out + &t;
                }
                prefix[g] += 1;
                if alg.generators()[g].parity == Parity::Odd {
                    odd_prefix = !odd_prefix;
                }
            }
        }
        Ok(out)
    }

    pub fn del(&self, f: &Form) -> Result<Form, AlgebraError> {
        self.derive(&self.spec.del, f)
    }

    pub fn dbar(&self, f: &Form) -> Result<Form, AlgebraError> {
        self.derive(&self.spec.dbar, f)
    }

    pub fn d(&self, f: &Form) -> Result<Form, AlgebraError> {
        Ok(&self.del(f)? + &self.dbar(f)?)
    }

    pub fn ddbar(&self, f: &Form) -> Result<Form, AlgebraError> {
        self.del(&self.dbar(f)?)
    }

    pub fn bidegree_of(&self, f: &Form) -> Option<(usize, usize)> {
        self.algebra().bidegree_of(f)
    }

    /// Coordinates of a form in the basis of `(p, q)`.
    pub fn to_vec(&self, f: &Form, p: usize, q: usize) -> Result<Vec<Scalar>, AlgebraError> {
        self.algebra().check_len(f)?;
        let mut v = vec![Scalar::zero(); self.basis_len(p, q)];
        for (m, c) in f.terms() {
            if self.algebra().bidegree(m) != (p, q) {
                return Err(AlgebraError::WrongBidegree {
                    expected: (p, q),
                    found: self.algebra().bidegree(m),
                });
            }
            let i = *self.index.get(m).ok_or_else(|| AlgebraError::NotInBasis {
                monomial: format!("{:?}", m.0),
            })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vec(&self, p: usize, q: usize, v: &[Scalar]) -> Form {
        let mut f = Form::zero(self.ngens());
        for (m, c) in self.basis(p, q).iter().zip(v) {
            f.add_term(m.clone(), c.clone());
        }
        f
    }

    pub fn contains_form(&self, f: &Form) -> bool {
        f.terms().all(|(m, _)| self.index.contains_key(m))
    }
}
