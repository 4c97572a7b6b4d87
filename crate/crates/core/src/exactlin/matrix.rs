use std::fmt;

use num_traits::Zero;

use super::{Rational, SparseVec};

/// Small dense matrix, used for structure-constant level linear algebra
/// (action matrices, bilinear forms). Column `j` is the image of `e_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::from_integer(1.into()));
        }
        m
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (&i, c) in col.iter() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            assert_eq!(row.len(), n_cols, "ragged matrix rows");
            data.extend(row);
        }
        Self {
            rows: n_rows,
            cols: n_cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn column(&self, j: usize) -> SparseVec {
        (0..self.rows).map(|i| (i, self.get(i, j).clone())).collect()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&j, c) in v.iter() {
            for i in 0..self.rows {
                let entry = self.get(i, j);
                if !entry.is_zero() {
                    out.add_term(i, &(entry * c));
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, scale: &Rational, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(&Rational::from_integer((-1).into()), other);
        out
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Rank by exact row reduction.
    pub fn rank(&self) -> usize {
        let rows: Vec<SparseVec> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| (j, self.get(i, j).clone())).collect())
            .collect();
        super::rref(&rows, self.cols).map(|b| b.rank()).unwrap_or(0)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;

    #[test]
    fn commutator_of_elementary_matrices() {
        // E12 E21 - E21 E12 = diag(1, -1)
        let e12 = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(0), int(0)]]);
        let e21 = e12.transpose();
        let h = Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(0), int(-1)]]);
        assert_eq!(e12.commutator(&e21), h);
        assert_eq!(h.trace(), int(0));
        assert_eq!(h.rank(), 2);
        assert_eq!(e12.rank(), 1);
    }

    #[test]
    fn apply_matches_columns() {
        let m = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(3), int(4)]]);
        assert_eq!(m.apply(&SparseVec::unit(1)), m.column(1));
    }
}
