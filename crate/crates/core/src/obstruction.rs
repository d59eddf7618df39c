//! Dimension bounds that rule out formal metrics, and blow-up arithmetic on tables.
//!
//! All bounds are necessary conditions, so a table that passes every test is only
//! reported as not obstructed by these tests.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::hodge::CohomologyTable;

/// A grid `[p][q]` whose entries may be unknown.
pub type Grid = Vec<Vec<Option<u64>>>;

/// Known cohomology dimensions of a compact complex manifold; `None` marks missing data.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct DimTable {
    pub n: usize,
    #[serde(default)]
    pub h_dbar: Option<Grid>,
    #[serde(default)]
    pub h_bc: Option<Grid>,
    #[serde(default)]
    pub h_a: Option<Grid>,
    #[serde(default)]
    pub betti: Option<Vec<Option<u64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObstructionError {
    #[error("table shape: {0}")]
    Shape(String),
    #[error("inconsistent table: {0}")]
    Inconsistent(String),
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn full_grid(n: usize, f: impl Fn(usize, usize) -> u64) -> Grid {
    (0..=n).map(|p| (0..=n).map(|q| Some(f(p, q))).collect()).collect()
}

/// Dimensions of the complex torus of dimension `n`.
pub fn torus_table(n: usize) -> DimTable {
    let h = full_grid(n, |p, q| binomial(n, p) * binomial(n, q));
    DimTable {
        n,
        h_dbar: Some(h.clone()),
        h_bc: Some(h.clone()),
        h_a: Some(h),
        betti: Some((0..=2 * n).map(|k| Some(binomial(2 * n, k))).collect()),
    }
}

impl DimTable {
    pub fn empty(n: usize) -> Self {
        DimTable {
            n,
            ..Default::default()
        }
    }

    fn grid(&self, which: GridKind) -> Option<&Grid> {
        match which {
            GridKind::Dbar => self.h_dbar.as_ref(),
            GridKind::Bc => self.h_bc.as_ref(),
            GridKind::A => self.h_a.as_ref(),
        }
    }

    fn get(&self, which: GridKind, p: usize, q: usize) -> Option<u64> {
        self.grid(which)
            .and_then(|g| g.get(p))
            .and_then(|r| r.get(q))
            .copied()
            .flatten()
    }

    fn b(&self, k: usize) -> Option<u64> {
        self.betti.as_ref().and_then(|b| b.get(k)).copied().flatten()
    }

    /// Checks array sizes and the symmetries every compact complex manifold satisfies.
    pub fn validate(&self) -> Result<(), ObstructionError> {
        let n = self.n;
        if n == 0 {
            return Err(ObstructionError::Shape("n must be at least 1".into()));
        }
        for (name, g) in [("h_dbar", &self.h_dbar), ("h_bc", &self.h_bc), ("h_a", &self.h_a)] {
            if let Some(g) = g {
                if g.len() != n + 1 || g.iter().any(|r| r.len() != n + 1) {
                    return Err(ObstructionError::Shape(format!("{name} must be {0}x{0}", n + 1)));
                }
            }
        }
        if let Some(b) = &self.betti {
            if b.len() != 2 * n + 1 {
                return Err(ObstructionError::Shape(format!(
                    "betti must have {} entries",
                    2 * n + 1
                )));
            }
        }
        let mismatch = |what: String, x: u64, y: u64| ObstructionError::Inconsistent(format!("{what}: {x} ≠ {y}"));
        for p in 0..=n {
            for q in 0..=n {
                for (kind, name) in [(GridKind::Bc, "h_bc"), (GridKind::A, "h_a")] {
                    if let (Some(x), Some(y)) = (self.get(kind, p, q), self.get(kind, q, p)) {
                        if x != y {
                            return Err(mismatch(format!("{name}^{{{p},{q}}} vs {name}^{{{q},{p}}}"), x, y));
                        }
                    }
                }
                if let (Some(x), Some(y)) = (self.get(GridKind::Dbar, p, q), self.get(GridKind::Dbar, n - p, n - q)) {
                    if x != y {
                        return Err(mismatch(
                            format!("Serre duality h_dbar^{{{p},{q}}} vs h_dbar^{{{},{}}}", n - p, n - q),
                            x,
                            y,
                        ));
                    }
                }
                if let (Some(x), Some(y)) = (self.get(GridKind::A, p, q), self.get(GridKind::Bc, n - p, n - q)) {
                    if x != y {
                        return Err(mismatch(
                            format!("h_a^{{{p},{q}}} vs h_bc^{{{},{}}}", n - p, n - q),
                            x,
                            y,
                        ));
                    }
                }
            }
        }
        for k in 0..=2 * n {
            if let (Some(x), Some(y)) = (self.b(k), self.b(2 * n - k)) {
                if x != y {
                    return Err(mismatch(format!("Poincaré duality b_{k} vs b_{}", 2 * n - k), x, y));
                }
            }
        }
        Ok(())
    }
}

impl From<&CohomologyTable> for DimTable {
    fn from(t: &CohomologyTable) -> Self {
        let grid =
            |g: &Vec<Vec<usize>>| -> Grid { g.iter().map(|r| r.iter().map(|&x| Some(x as u64)).collect()).collect() };
        DimTable {
            n: t.n,
            h_dbar: Some(grid(&t.h_dbar)),
            h_bc: Some(grid(&t.h_bc)),
            h_a: Some(grid(&t.h_a)),
            betti: Some(t.betti.iter().map(|&b| Some(b as u64)).collect()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
enum GridKind {
    Dbar,
    Bc,
    A,
}

impl GridKind {
    fn symbol(self) -> &'static str {
        match self {
            GridKind::Dbar => "h_∂̄",
            GridKind::Bc => "h_BC",
            GridKind::A => "h_A",
        }
    }
}

/// Formality notions the dimension tests speak about.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Riemannian geometric formality.
    Geometric,
    Dolbeault,
    /// Bott-Chern formality with harmonic forms of constant pointwise norm.
    BottChernCn,
    Abc,
    Aeppli,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::Geometric,
        Target::Dolbeault,
        Target::BottChernCn,
        Target::Abc,
        Target::Aeppli,
    ];

    /// Notions implied by this one; an obstruction to any of them obstructs this one.
    fn implies(self) -> &'static [Target] {
        match self {
            Target::Aeppli => &[Target::Abc, Target::Dolbeault, Target::Geometric],
            Target::Abc => &[Target::BottChernCn],
            _ => &[],
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Geometric => "geometric formality",
            Target::Dolbeault => "geometric Dolbeault formality",
            Target::BottChernCn => "geometric Bott-Chern (CN) formality",
            Target::Abc => "ABC-geometric formality",
            Target::Aeppli => "geometric Aeppli formality",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Obstructed,
    NotObstructedByTheseTests,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Obstructed => "obstructed",
            Verdict::NotObstructedByTheseTests => "not obstructed by these tests",
        })
    }
}

/// One instantiated inequality `lhs ≤ rhs`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Test {
    pub name: String,
    pub lhs: u64,
    pub rhs: u64,
    /// Notions that the failure of this inequality obstructs.
    pub obstructs: Vec<Target>,
}

impl Test {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

impl fmt::Display for Test {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.holds() { "≤" } else { ">" };
        write!(f, "{}: {} {rel} {}", self.name, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub verdicts: Vec<(Target, Verdict)>,
    /// Inequalities that fail on the table.
    pub fired: Vec<Test>,
    /// Inequalities that hold.
    pub passed: Vec<Test>,
    /// Inequalities that could not be evaluated, with the missing data.
    pub skipped: Vec<String>,
}

impl ObstructionReport {
    pub fn verdict(&self, t: Target) -> Verdict {
        self.verdicts
            .iter()
            .find(|(x, _)| *x == t)
            .map(|(_, v)| *v)
            .unwrap_or(Verdict::NotObstructedByTheseTests)
    }
}

struct Collector {
    tests: Vec<Test>,
    skipped: Vec<String>,
}

impl Collector {
    fn push(&mut self, name: String, lhs: Option<u64>, rhs: Option<u64>, obstructs: &[Target]) {
        match (lhs, rhs) {
            (Some(lhs), Some(rhs)) => self.tests.push(Test {
                name,
                lhs,
                rhs,
                obstructs: obstructs.to_vec(),
            }),
            _ => self.skipped.push(name),
        }
    }
}

fn sum(values: impl Iterator<Item = Option<u64>>) -> Option<u64> {
    values.sum()
}

/// Runs every applicable test on a table.
pub fn analyze(t: &DimTable) -> Result<ObstructionReport, ObstructionError> {
    t.validate()?;
    let n = t.n;
    let torus = |p: usize, q: usize| binomial(n, p) * binomial(n, q);
    let mut c = Collector {
        tests: Vec::new(),
        skipped: Vec::new(),
    };
    let any_grid = t.h_dbar.is_some() || t.h_bc.is_some() || t.h_a.is_some();

    use Target::*;
    // bigraded bounds: product lower bounds and torus upper bounds
    let families: [(GridKind, &[Target], &[Target]); 3] = [
        (GridKind::Dbar, &[Dolbeault, Aeppli], &[Dolbeault, Aeppli]),
        (GridKind::Bc, &[BottChernCn, Abc, Aeppli], &[BottChernCn, Abc, Aeppli]),
        (GridKind::A, &[Aeppli], &[BottChernCn, Abc, Aeppli]),
    ];
    for (kind, product_targets, upper_targets) in families {
        if t.grid(kind).is_none() {
            continue;
        }
        let s = kind.symbol();
        for p in 0..=n {
            for q in 0..=n {
                if !product_targets.is_empty() && p > 0 && q > 0 {
                    let lhs = t.get(kind, p, 0).zip(t.get(kind, 0, q)).map(|(a, b)| a * b);
                    c.push(
                        format!("{s}^{{{p},0}}·{s}^{{0,{q}}} ≤ {s}^{{{p},{q}}}"),
                        lhs,
                        t.get(kind, p, q),
                        product_targets,
                    );
                }
                c.push(
                    format!("{s}^{{{p},{q}}} ≤ h^{{{p},{q}}}(torus)"),
                    t.get(kind, p, q),
                    Some(torus(p, q)),
                    upper_targets,
                );
            }
        }
    }
    if t.betti.is_some() {
        for k in 0..=2 * n {
            let bound = Some(binomial(2 * n, k));
            c.push(
                format!("b_{k} ≤ b_{k}(torus)"),
                t.b(k),
                bound,
                &[Geometric, Dolbeault, BottChernCn, Abc, Aeppli],
            );
        }
        for k in 0..=2 * n {
            let blocks = || (k.saturating_sub(n)..=k.min(n)).map(move |p| (p, k - p));
            if t.h_bc.is_some() || t.h_a.is_some() {
                let rhs = sum(blocks().map(|(p, q)| Some(t.get(GridKind::Bc, p, q)? + t.get(GridKind::A, p, q)?)));
                c.push(
                    format!("2b_{k} ≤ Σ_{{p+q={k}}} (h_BC + h_A)"),
                    t.b(k).map(|b| 2 * b),
                    rhs,
                    &[BottChernCn, Abc, Aeppli],
                );
            }
        }
    } else if any_grid {
        c.skipped.push("Betti-number bounds (no Betti numbers)".into());
    }
    if !any_grid {
        c.skipped.push("bigraded bounds (no h_∂̄, h_BC or h_A)".into());
    }

    let (fired, passed): (Vec<Test>, Vec<Test>) = c.tests.into_iter().partition(|x| !x.holds());
    let mut obstructed: Vec<Target> = fired.iter().flat_map(|x| x.obstructs.iter().copied()).collect();
    // propagate along implications until stable
    loop {
        let before = obstructed.len();
        for t in Target::ALL {
            if !obstructed.contains(&t) && t.implies().iter().any(|i| obstructed.contains(i)) {
                obstructed.push(t);
            }
        }
        if obstructed.len() == before {
            break;
        }
    }
    let verdicts = Target::ALL
        .iter()
        .map(|&t| {
            (
                t,
                if obstructed.contains(&t) {
                    Verdict::Obstructed
                } else {
                    Verdict::NotObstructedByTheseTests
                },
            )
        })
        .collect();
    Ok(ObstructionReport {
        verdicts,
        fired,
        passed,
        skipped: c.skipped,
    })
}

/// Betti numbers of the blow-up of `base` along `center` of codimension `k`.
pub fn blowup_derham(base: &DimTable, center: &DimTable, k: usize) -> Result<DimTable, ObstructionError> {
    if k < 2 {
        return Err(ObstructionError::Shape("codimension must be at least 2".into()));
    }
    if k > base.n {
        return Err(ObstructionError::Shape(format!(
            "codimension {k} exceeds the dimension {}",
            base.n
        )));
    }
    let center_dim = base.n - k;
    let missing = || ObstructionError::Shape("blow-up needs the Betti numbers of base and center".into());
    let bb = base.betti.as_ref().ok_or_else(missing)?;
    let cb: Vec<u64> = match (center_dim, &center.betti) {
        (0, None) => vec![1],
        (_, Some(b)) => b.iter().map(|x| x.ok_or_else(missing)).collect::<Result<_, _>>()?,
        (_, None) => return Err(missing()),
    };
    if (center_dim == 0 && cb.len() != 1)
        || (center_dim > 0 && (center.n != center_dim || cb.len() != 2 * center_dim + 1))
    {
        return Err(ObstructionError::Shape(format!(
            "center must have complex dimension {center_dim}"
        )));
    }
    let mut betti = Vec::with_capacity(bb.len());
    for (j, b) in bb.iter().enumerate() {
        let b = b.ok_or_else(missing)?;
        let extra: u64 = (1..k).filter(|i| j >= 2 * i).filter_map(|i| cb.get(j - 2 * i)).sum();
        betti.push(Some(b + extra));
    }
    Ok(DimTable {
        n: base.n,
        h_dbar: None,
        h_bc: None,
        h_a: None,
        betti: Some(betti),
    })
}

/// Bott-Chern numbers of the blow-up of a threefold along a curve: `h_BC^{p,q} + h_∂̄^{p-1,q-1}(curve)`.
pub fn blowup_bc_threefold_curve(base: &DimTable, curve: &DimTable) -> Result<DimTable, ObstructionError> {
    if base.n != 3 {
        return Err(ObstructionError::Shape("base must be a threefold".into()));
    }
    if curve.n != 1 {
        return Err(ObstructionError::Shape("center must be a curve".into()));
    }
    let bc = base
        .h_bc
        .as_ref()
        .ok_or_else(|| ObstructionError::Shape("base needs h_bc".into()))?;
    let z = curve
        .h_dbar
        .as_ref()
        .ok_or_else(|| ObstructionError::Shape("curve needs h_dbar".into()))?;
    base.validate()?;
    curve.validate()?;
    let mut out = bc.clone();
    for (p, row) in out.iter_mut().enumerate() {
        for (q, cell) in row.iter_mut().enumerate() {
            if p >= 1 && q >= 1 && p - 1 <= 1 && q - 1 <= 1 {
                *cell = match (*cell, z[p - 1][q - 1]) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                };
            }
        }
    }
    Ok(DimTable {
        n: 3,
        h_dbar: None,
        h_bc: Some(out),
        h_a: None,
        betti: None,
    })
}

/// Hodge numbers of `P^1`.
pub fn rational_curve() -> DimTable {
    DimTable {
        n: 1,
        h_dbar: Some(vec![vec![Some(1), Some(0)], vec![Some(0), Some(1)]]),
        h_bc: None,
        h_a: None,
        betti: Some(vec![Some(1), Some(0), Some(1)]),
    }
}

/// Completes a table for a manifold satisfying the ∂∂̄-lemma from its Bott-Chern numbers.
///
/// Under the ∂∂̄-lemma all bigraded dimensions agree and `b_k = Σ_{p+q=k} h_BC^{p,q}`.
pub fn ddbar_lemma_completion(t: &DimTable) -> Result<DimTable, ObstructionError> {
    let bc = t
        .h_bc
        .clone()
        .ok_or_else(|| ObstructionError::Shape("needs h_bc".into()))?;
    let n = t.n;
    let betti = (0..=2 * n)
        .map(|k| {
            (k.saturating_sub(n)..=k.min(n))
                .map(|p| bc[p][k - p])
                .sum::<Option<u64>>()
        })
        .collect();
    Ok(DimTable {
        n,
        h_dbar: Some(bc.clone()),
        h_bc: Some(bc.clone()),
        h_a: Some(bc),
        betti: Some(betti),
    })
}
