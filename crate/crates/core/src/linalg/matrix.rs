//! Sparse row-major matrices over [`Scalar`].

use std::fmt;

use super::gauss::{integral_row, reduce, Reduced};
use super::scalar::Scalar;
use super::subspace::Subspace;
use super::LinalgError;

pub type SparseRow = Vec<(usize, Scalar)>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Scalar::one())]).collect();
        Matrix { rows: n, cols: n, data }
    }

    pub fn from_dense(rows: usize, cols: usize, entries: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        if entries.len() != rows {
            return Err(LinalgError::DimensionMismatch {
                expected: rows,
                found: entries.len(),
            });
        }
        let mut data = Vec::with_capacity(rows);
        for row in entries {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.push(row.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from sparse columns; entries with the same row index add up.
    pub fn from_columns(rows: usize, columns: &[SparseRow]) -> Result<Self, LinalgError> {
        let mut data: Vec<SparseRow> = vec![Vec::new(); rows];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                if *r >= rows {
                    return Err(LinalgError::DimensionMismatch {
                        expected: rows,
                        found: r + 1,
                    });
                }
                match data[*r].last_mut() {
                    Some((last, acc)) if *last == c => *acc += v,
                    _ => data[*r].push((c, v.clone())),
                }
            }
        }
        for row in &mut data {
            row.retain(|(_, v)| !v.is_zero());
        }
        Ok(Matrix {
            rows,
            cols: columns.len(),
            data,
        })
    }

    pub fn from_column_vectors(rows: usize, columns: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let sparse: Vec<SparseRow> = columns
            .iter()
            .map(|c| {
                if c.len() != rows {
                    return Err(LinalgError::DimensionMismatch {
                        expected: rows,
                        found: c.len(),
                    });
                }
                Ok(c.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect())
            })
            .collect::<Result<_, _>>()?;
        Matrix::from_columns(rows, &sparse)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseRow {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r]
            .binary_search_by_key(&c, |e| e.0)
            .map(|k| self.data[r][k].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out[r][*c] = v.clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| !v[*c].is_zero())
                    .map(|(c, a)| a * &v[*c])
                    .sum()
            })
            .collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: std::collections::BTreeMap<usize, Scalar> = Default::default();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    *acc.entry(*c).or_insert_with(Scalar::zero) += &(a * b);
                }
            }
            data.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        self.transpose_with(|v| v.clone())
    }

    pub fn conj_transpose(&self) -> Matrix {
        self.transpose_with(Scalar::conj)
    }

    fn transpose_with(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, f(v)));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn conj(&self) -> Matrix {
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, v.conj())).collect())
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `diag(d) * self`.
    pub fn scale_rows(&self, d: &[Scalar]) -> Result<Matrix, LinalgError> {
        if d.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: d.len(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(d)
            .map(|(row, s)| {
                row.iter()
                    .map(|(c, v)| (*c, v * s))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `self * diag(d)`.
    pub fn scale_cols(&self, d: &[Scalar]) -> Result<Matrix, LinalgError> {
        if d.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: d.len(),
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, v)| (*c, v * &d[*c]))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Stacks matrices vertically; all must share the column count `cols`.
    pub fn vstack(cols: usize, parts: &[&Matrix]) -> Result<Matrix, LinalgError> {
        let mut data = Vec::new();
        for m in parts {
            if m.cols != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: m.cols,
                });
            }
            data.extend(m.data.iter().cloned());
        }
        Ok(Matrix {
            rows: data.len(),
            cols,
            data,
        })
    }

    /// Places matrices side by side; all must share the row count `rows`.
    pub fn hstack(rows: usize, parts: &[&Matrix]) -> Result<Matrix, LinalgError> {
        let mut data: Vec<SparseRow> = vec![Vec::new(); rows];
        let mut offset = 0;
        for m in parts {
            if m.rows != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    found: m.rows,
                });
            }
            for (r, row) in m.data.iter().enumerate() {
                data[r].extend(row.iter().map(|(c, v)| (c + offset, v.clone())));
            }
            offset += m.cols;
        }
        Ok(Matrix {
            rows,
            cols: offset,
            data,
        })
    }

    fn reduced(&self) -> Reduced {
        reduce(self.data.iter().map(|r| integral_row(r)).collect(), self.cols)
    }

    pub fn rank(&self) -> usize {
        self.reduced().rank()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the null space, one vector per free column, normalised to 1 there.
    pub fn kernel_vectors(&self) -> Vec<Vec<Scalar>> {
        let red = self.reduced();
        let mut is_pivot = vec![false; self.cols];
        for &c in &red.pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (i, &pc) in red.pivots.iter().enumerate() {
                if let Some(a) = red.entry(i, f) {
                    v[pc] = -Scalar::from_gauss_ratio(a, &red.denom);
                }
            }
            out.push(v);
        }
        out
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::from_independent(self.cols, self.kernel_vectors())
    }

    /// Column space, as a subspace of the codomain.
    pub fn image(&self) -> Subspace {
        Subspace::span(
            self.rows,
            &self
                .transpose()
                .data
                .iter()
                .map(|c| densify(c, self.rows))
                .collect::<Vec<_>>(),
        )
        .expect("column lengths match")
    }

    /// Some solution of `self * x = b`, with every free variable set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let aug = self.cols;
        let rows = self
            .data
            .iter()
            .zip(b)
            .map(|(row, rhs)| {
                let mut r = row.clone();
                if !rhs.is_zero() {
                    r.push((aug, rhs.clone()));
                }
                integral_row(&r)
            })
            .collect();
        let red = reduce(rows, aug);
        if red.rows[red.rank()..].iter().any(|r| !r.is_empty()) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &pc) in red.pivots.iter().enumerate() {
            if let Some(a) = red.entry(i, aug) {
                x[pc] = Scalar::from_gauss_ratio(a, &red.denom);
            }
        }
        Ok(Some(x))
    }

    /// Reduced row echelon form of the row space, pivots normalised to 1.
    pub(crate) fn rref_rows(&self) -> Vec<SparseRow> {
        let red = self.reduced();
        red.pivot_rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, v)| (*c, Scalar::from_gauss_ratio(v, &red.denom)))
                    .collect()
            })
            .collect()
    }
}

pub(crate) fn densify(row: &SparseRow, len: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); len];
    for (c, x) in row {
        v[*c] = x.clone();
    }
    v
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
