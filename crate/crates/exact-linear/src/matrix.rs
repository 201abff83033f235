use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::Error;

/// Dense integer matrix with arbitrary-precision entries, row-major storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, Error> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {}x{}={} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntegerMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Build from row slices of machine integers; handy in tests and fixtures.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation [self ; other].
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn submatrix_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += c * row[b]
    pub fn add_row_multiple(&mut self, a: usize, b: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(a, j) + c * self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// col[a] += c * col[b]
    pub fn add_col_multiple(&mut self, a: usize, b: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, a) + c * self.get(i, b);
            self.set(i, a, v);
        }
    }

    pub fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j);
            self.set(a, j, v);
        }
    }

    pub fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, a);
            self.set(i, a, v);
        }
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_identity() {
        let m = IntegerMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.mul(&IntegerMatrix::identity(2)), m);
        assert_eq!(IntegerMatrix::identity(2).mul(&m), m);
    }

    #[test]
    fn empty_shapes_compose() {
        let a = IntegerMatrix::zeros(0, 3);
        let b = IntegerMatrix::zeros(3, 2);
        let p = a.mul(&b);
        assert_eq!((p.rows(), p.cols()), (0, 2));
        let q = b.transpose().mul(&a.transpose());
        assert_eq!((q.rows(), q.cols()), (2, 0));
    }
}
