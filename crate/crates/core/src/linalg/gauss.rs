//! Gaussian integers and fraction-free Gauss-Jordan elimination over them.
//!
//! Every row is cleared of denominators up front, then reduced with the
//! Bareiss update `row_i <- (p_k * row_i - a_i * row_r) / p_{k-1}`. All divisions
//! are exact, intermediate entries are minors of the input, and the final pivot
//! value `d` is shared by every pivot row, so the output is `d * RREF`.

use std::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    pub fn one() -> Self {
        GaussInt::new(BigInt::one(), BigInt::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussInt::new(self.re.clone(), -&self.im)
    }

    pub fn neg(&self) -> Self {
        GaussInt::new(-&self.re, -&self.im)
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `self / d`, which the caller guarantees is a Gaussian integer.
    pub fn exact_div(&self, d: &GaussInt) -> GaussInt {
        if d.im.is_zero() {
            if d.re.is_one() {
                return self.clone();
            }
            let (qr, rr) = self.re.div_rem(&d.re);
            let (qi, ri) = self.im.div_rem(&d.re);
            assert!(rr.is_zero() && ri.is_zero(), "inexact Gaussian division");
            return GaussInt::new(qr, qi);
        }
        let top = self * &d.conj();
        let n = d.norm();
        let (qr, rr) = top.re.div_rem(&n);
        let (qi, ri) = top.im.div_rem(&n);
        assert!(rr.is_zero() && ri.is_zero(), "inexact Gaussian division");
        GaussInt::new(qr, qi)
    }
}

impl<'a> Mul<&'a GaussInt> for &'a GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: &GaussInt) -> GaussInt {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussInt::new(&self.re * &rhs.re, BigInt::zero());
        }
        GaussInt::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Sub<&'a GaussInt> for &'a GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: &GaussInt) -> GaussInt {
        GaussInt::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

pub(crate) type IntRow = Vec<(usize, GaussInt)>;

/// Clears denominators of a sparse scalar row.
pub(crate) fn integral_row(row: &[(usize, Scalar)]) -> IntRow {
    let mut scale = BigInt::one();
    for (_, v) in row {
        scale = scale.lcm(&v.denom_lcm());
    }
    row.iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.scaled_to_gauss(&scale)))
        .collect()
}

fn entry(row: &IntRow, col: usize) -> Option<&GaussInt> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

/// `(p * x - a * y) / prev`, merged over the sparse supports.
fn combine(p: &GaussInt, x: &IntRow, a: &GaussInt, y: &IntRow, prev: &GaussInt) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cy = y.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (col, val) = if cx < cy {
            i += 1;
            (cx, &x[i - 1].1 * p)
        } else if cy < cx {
            j += 1;
            (cy, (&y[j - 1].1 * a).neg())
        } else {
            i += 1;
            j += 1;
            (cx, &(&x[i - 1].1 * p) - &(&y[j - 1].1 * a))
        };
        if !val.is_zero() {
            out.push((col, val.exact_div(prev)));
        }
    }
    out
}

fn rescale(p: &GaussInt, x: &mut IntRow, prev: &GaussInt) {
    if p == prev {
        return;
    }
    if *p == prev.neg() {
        for (_, v) in x.iter_mut() {
            *v = v.neg();
        }
        return;
    }
    for (_, v) in x.iter_mut() {
        *v = (&*v * p).exact_div(prev);
    }
}

/// Output of [`reduce`]: the first `pivots.len()` rows are the pivot rows, in
/// pivot order, each with entry `denom` in its pivot column and zero in every
/// other pivot column.
pub(crate) struct Reduced {
    pub rows: Vec<IntRow>,
    pub pivots: Vec<usize>,
    pub denom: GaussInt,
}

impl Reduced {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_rows(&self) -> &[IntRow] {
        &self.rows[..self.pivots.len()]
    }

    pub fn entry(&self, row: usize, col: usize) -> Option<&GaussInt> {
        entry(&self.rows[row], col)
    }
}

/// Fraction-free Gauss-Jordan elimination, pivoting only on columns `< pivot_limit`.
pub(crate) fn reduce(mut rows: Vec<IntRow>, pivot_limit: usize) -> Reduced {
    rows.retain(|r| !r.is_empty());
    let mut prev = GaussInt::one();
    let mut pivots = Vec::new();
    let mut cols: Vec<usize> = rows
        .iter()
        .flat_map(|r| r.iter().map(|e| e.0))
        .filter(|&c| c < pivot_limit)
        .collect();
    cols.sort_unstable();
    cols.dedup();

    for col in cols {
        let r = pivots.len();
        if r == rows.len() {
            break;
        }
        // smallest pivot keeps entries small; ties go to the sparsest row
        let mut best: Option<(usize, BigInt, usize)> = None;
        for (k, row) in rows.iter().enumerate().skip(r) {
            if let Some(v) = entry(row, col) {
                let n = v.norm();
                let better = match &best {
                    None => true,
                    Some((_, bn, bl)) => n < *bn || (n == *bn && row.len() < *bl),
                };
                if better {
                    best = Some((k, n, row.len()));
                }
            }
        }
        let Some((k, _, _)) = best else { continue };
        rows.swap(r, k);
        let p = entry(&rows[r], col).cloned().expect("pivot present");
        let pivot_row = rows[r].clone();
        for (idx, row) in rows.iter_mut().enumerate() {
            if idx == r {
                continue;
            }
            match entry(row, col).cloned() {
                Some(a) => *row = combine(&p, row, &a, &pivot_row, &prev),
                None => rescale(&p, row, &prev),
            }
        }
        prev = p;
        pivots.push(col);
    }

    Reduced {
        rows,
        pivots,
        denom: prev,
    }
}
