//! Dense complex linear algebra.
//!
//! Everything downstream (discrete Laplacians, Q-functions, finite-element
//! systems) is carried by [`ComplexMatrix`] / [`HermitianMatrix`]. The module
//! has no external numerical dependencies: Hermitian eigenproblems are solved
//! by cyclic Jacobi ([`hermitian_eig`]), linear systems by LU with partial
//! pivoting, and eigenvalue counting by Householder tridiagonalisation with
//! Sturm sequences.

mod jacobi;
mod lu;
mod tridiag;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

pub use jacobi::{hermitian_eig, EigenDecomposition};
pub use lu::{cholesky, solve_hermitian, Cholesky, LuFactorization};
pub use tridiag::{inertia, lowest_eigenvalues, Inertia, Tridiagonal};

/// Shorthand for the complex scalar used everywhere in the crate.
pub type C64 = Complex64;

/// Absolute floor used by all relative tolerances.
pub const ABS_FLOOR: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("singular matrix: pivot {pivot:e} at column {column} is below tolerance {tolerance:e}")]
    Singular {
        column: usize,
        pivot: f64,
        tolerance: f64,
    },
    #[error("matrix is not positive definite (pivot {pivot:e} at column {column})")]
    NotPositiveDefinite { column: usize, pivot: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite entry in matrix")]
    NonFinite,
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major storage.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[C64]) {
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, x.len(), "mul_vec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// Adds `shift` to every diagonal entry.
    pub fn shift_diagonal(&self, shift: C64) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += shift;
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm (largest singular value), via the eigenvalues of `A*A`.
    pub fn operator_norm(&self) -> Result<f64, LinalgError> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        let gram = if self.rows < self.cols {
            self.matmul(&self.adjoint())
        } else {
            self.adjoint().matmul(self)
        };
        let eig = hermitian_eig(&HermitianMatrix::new(gram)?)?;
        Ok(eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0).sqrt())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Copies the block `rows x cols` starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for v in self.row(i) {
                write!(f, "{:+.6}{:+.6}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Square complex matrix that is Hermitian by construction.
///
/// The constructor symmetrises its input, `A <- (A + A*)/2`, so the stored
/// matrix is Hermitian up to rounding in the last bit.
#[derive(Clone, PartialEq, Debug)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::Dimension(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows, m.cols
            )));
        }
        if !m.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let n = m.rows;
        let sym = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * 0.5
            }
        });
        Ok(Self(sym))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    /// `self + s I` for real `s`.
    pub fn shifted(&self, s: f64) -> Self {
        Self(self.0.shift_diagonal(C64::new(s, 0.0)))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.scale(C64::new(s, 0.0)))
    }

    /// Real linear combination `a*self + b*other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        Self(self.0.zip_with(&other.0, |x, y| x * a + y * b))
    }

    /// Unitary congruence `U self U*`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self, LinalgError> {
        Self::new(u.matmul(&self.0).matmul(&u.adjoint()))
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `<x, y>` with the conjugate on the first argument.
pub fn vec_dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hermitian_construction_symmetrises() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 0.3), c(2.0, 1.0)], vec![c(2.0, -3.0), c(4.0, 0.0)]])
            .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h[(0, 0)], c(1.0, 0.0));
        assert_eq!(h[(0, 1)], c(2.0, 2.0));
        assert_eq!(h[(1, 0)], c(2.0, -2.0));
    }

    #[test]
    fn non_square_is_rejected() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(m), Err(LinalgError::Dimension(_))));
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(0.0, 2.0)], vec![c(3.0, 0.0), c(1.0, -1.0)]])
            .unwrap();
        let p = a.matmul(&a.adjoint());
        // (A A*) is Hermitian with real diagonal |row|^2
        assert!((p[(0, 0)] - c(6.0, 0.0)).norm() < 1e-15);
        assert!((p[(1, 1)] - c(11.0, 0.0)).norm() < 1e-15);
        assert!((p[(0, 1)] - p[(1, 0)].conj()).norm() < 1e-15);
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -3.0, 2.0]);
        assert!((d.operator_norm().unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(ComplexMatrix::zeros(0, 4).operator_norm().unwrap(), 0.0);
    }
}
