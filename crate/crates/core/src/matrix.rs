//! Dense square matrices of dimension 1..=8.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported dimension. The principal-minor oracle enumerates all
/// `2^dim` index subsets.
pub const MAX_DIM: usize = 8;

/// Row-major dense `dim x dim` real matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::invalid(format!(
            "matrix dimension {dim} outside 1..={MAX_DIM}"
        )))
    } else {
        Ok(())
    }
}

impl SquareMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let m = SquareMatrix { dim, data };
        m.validate()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        SquareMatrix::new(dim, data)
    }

    /// Builds a matrix entry by entry.
    ///
    /// Panics if `dim` is outside `1..=MAX_DIM`; finiteness is checked by
    /// the operations that consume the matrix.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "matrix dimension {dim} out of range"
        );
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        SquareMatrix { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| 0.0)
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    /// Checks the type invariants: dimension in range and all entries finite.
    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim)?;
        if self.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scaled(&self, c: f64) -> Self {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    /// `self + c * I`.
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out[(i, i)] += c;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// Principal submatrix on the given (sorted, distinct) index set.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |i, j| self[(indices[i], indices[j])])
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .unwrap_or(col);
            let p = a[pivot * n + col];
            if p == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            det *= p;
            for row in (col + 1)..n {
                let factor = a[row * n + col] / p;
                if factor != 0.0 {
                    for k in col..n {
                        a[row * n + k] -= factor * a[col * n + k];
                    }
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        SquareMatrix::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * rhs[(k, j)]).sum())
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;
    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;
    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        self.scaled(-1.0)
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        assert!(SquareMatrix::new(0, vec![]).is_err());
        assert!(SquareMatrix::new(9, vec![0.0; 81]).is_err());
        assert!(SquareMatrix::new(2, vec![0.0; 3]).is_err());
        assert!(SquareMatrix::new(1, vec![f64::NAN]).is_err());
        assert!(SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn determinant_small_cases() {
        let a = SquareMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(a.determinant(), 1.0);
        let b = SquareMatrix::from_rows(&[
            vec![2.0, 0.0, 1.0],
            vec![1.0, 3.0, 2.0],
            vec![1.0, 1.0, 1.0],
        ])
        .unwrap();
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(b.determinant().abs() < 1e-15);
        assert_eq!(SquareMatrix::diagonal(&[1.0, 2.0, 3.0]).determinant(), 6.0);
    }

    #[test]
    fn product_and_trace() {
        let a = SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let p = &a * &a;
        assert_eq!(p.rows(), vec![vec![7.0, 10.0], vec![15.0, 22.0]]);
        assert_eq!(p.trace(), 29.0);
        assert_eq!(a.transpose()[(0, 1)], 3.0);
    }
}
