use serde::Serialize;

use super::{Degree, Hodge, HodgeError, Theory};

/// All cohomology dimensions of a model.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CohomologyTable {
    pub model: String,
    pub n: usize,
    /// Indexed `[p][q]`.
    pub h_dbar: Vec<Vec<usize>>,
    pub h_del: Vec<Vec<usize>>,
    pub h_bc: Vec<Vec<usize>>,
    pub h_a: Vec<Vec<usize>>,
    pub betti: Vec<usize>,
}

impl CohomologyTable {
    fn build(hodge: &Hodge, dim: impl Fn(Theory, Degree) -> Result<usize, HodgeError>) -> Result<Self, HodgeError> {
        let n = hodge.n();
        let grid = |t: Theory| -> Result<Vec<Vec<usize>>, HodgeError> {
            (0..=n)
                .map(|p| (0..=n).map(|q| dim(t, Degree::Bi(p, q))).collect())
                .collect()
        };
        Ok(CohomologyTable {
            model: hodge.model().name().to_string(),
            n,
            h_dbar: grid(Theory::Dolbeault)?,
            h_del: grid(Theory::ConjDolbeault)?,
            h_bc: grid(Theory::BottChern)?,
            h_a: grid(Theory::Aeppli)?,
            betti: (0..=2 * n)
                .map(|k| dim(Theory::DeRham, Degree::Total(k)))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Dimensions from rank-nullity on the quotients.
    pub fn from_oracle(hodge: &Hodge) -> Result<Self, HodgeError> {
        Self::build(hodge, |t, d| hodge.cohomology_dim(t, d))
    }

    /// Dimensions of the harmonic spaces.
    pub fn from_harmonic(hodge: &Hodge) -> Result<Self, HodgeError> {
        Self::build(hodge, |t, d| Ok(hodge.harmonic_space(t, d)?.dim()))
    }

    pub fn grid(&self, theory: Theory) -> Option<&Vec<Vec<usize>>> {
        match theory {
            Theory::Dolbeault => Some(&self.h_dbar),
            Theory::ConjDolbeault => Some(&self.h_del),
            Theory::BottChern => Some(&self.h_bc),
            Theory::Aeppli => Some(&self.h_a),
            Theory::DeRham => None,
        }
    }

    /// `Σ_{p+q=k} h^{p,q}`.
    pub fn diagonal_sum(grid: &[Vec<usize>], k: usize) -> usize {
        let n = grid.len() - 1;
        (k.saturating_sub(n)..=k.min(n)).map(|p| grid[p][k - p]).sum()
    }
}

/// Text diamond: one row per total degree, degree 0 at the bottom, entries with `p` decreasing.
pub fn render_diamond(table: &CohomologyTable, theory: Theory) -> String {
    let n = table.n;
    let rows: Vec<String> = match table.grid(theory) {
        Some(grid) => (0..=2 * n)
            .map(|k| {
                (k.saturating_sub(n)..=k.min(n))
                    .rev()
                    .map(|p| format!("{:>3}", grid[p][k - p]))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect(),
        None => table.betti.iter().map(|b| format!("{b:>3}")).collect(),
    };
    let rows: Vec<String> = rows.into_iter().rev().collect();
    let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let pad = (width - r.len()) / 2;
        out.push_str(&" ".repeat(pad));
        out.push_str(r.trim_end());
        out.push('\n');
    }
    out
}
