use super::{ComplexMatrix, HermitianMatrix, LinalgError, ABS_FLOOR, C64};

const PIVOT_REL_TOL: f64 = 1e-13;

/// LU factorisation with partial (row) pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl LuFactorization {
    pub fn new(a: &ComplexMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if !a.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let n = a.rows();
        let tolerance = (PIVOT_REL_TOL * a.max_abs()).max(ABS_FLOOR);
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv_row, piv_abs) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if piv_abs <= tolerance {
                return Err(LinalgError::Singular {
                    column: k,
                    pivot: piv_abs,
                    tolerance,
                });
            }
            if piv_row != k {
                perm.swap(piv_row, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv_row, j)];
                    lu[(piv_row, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let ukj = lu[(k, j)];
                    lu[(i, j)] -= factor * ukj;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let n = self.dim();
        assert_eq!(rhs.len(), n, "rhs length mismatch");
        let mut x: Vec<C64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rhs.rows(), rhs.cols());
        for j in 0..rhs.cols() {
            out.set_column(j, &self.solve(&rhs.column(j)));
        }
        out
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve_matrix(&ComplexMatrix::identity(self.dim()))
    }
}

/// Solves `(A - shift I) x = rhs` by LU with partial pivoting.
pub fn solve_hermitian(a: &HermitianMatrix, shift: C64, rhs: &[C64]) -> Result<Vec<C64>, LinalgError> {
    if rhs.len() != a.dim() {
        return Err(LinalgError::Dimension(format!(
            "rhs has length {}, matrix is {}x{}",
            rhs.len(),
            a.dim(),
            a.dim()
        )));
    }
    let shifted = a.matrix().shift_diagonal(-shift);
    Ok(LuFactorization::new(&shifted)?.solve(rhs))
}

/// Cholesky factor `A = R* R` of a Hermitian positive definite matrix, with
/// `R` upper triangular.
#[derive(Debug, Clone)]
pub struct Cholesky {
    r: ComplexMatrix,
}

pub fn cholesky(a: &HermitianMatrix) -> Result<Cholesky, LinalgError> {
    let n = a.dim();
    let mut r = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= r[(k, j)].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(LinalgError::NotPositiveDefinite { column: j, pivot: d });
        }
        let rjj = d.sqrt();
        r[(j, j)] = C64::new(rjj, 0.0);
        for i in j + 1..n {
            let mut s = a[(j, i)];
            for k in 0..j {
                s -= r[(k, j)].conj() * r[(k, i)];
            }
            r[(j, i)] = s / rjj;
        }
    }
    Ok(Cholesky { r })
}

impl Cholesky {
    pub fn factor(&self) -> &ComplexMatrix {
        &self.r
    }

    /// Solves `R* y = b`.
    pub fn solve_lower(&self, b: &[C64]) -> Vec<C64> {
        let n = self.r.rows();
        let mut y = b.to_vec();
        for i in 0..n {
            let mut acc = y[i];
            for k in 0..i {
                acc -= self.r[(k, i)].conj() * y[k];
            }
            y[i] = acc / self.r[(i, i)].re;
        }
        y
    }

    /// Solves `R x = y`.
    pub fn solve_upper(&self, y: &[C64]) -> Vec<C64> {
        let n = self.r.rows();
        let mut x = y.to_vec();
        for i in (0..n).rev() {
            let mut acc = x[i];
            for k in i + 1..n {
                acc -= self.r[(i, k)] * x[k];
            }
            x[i] = acc / self.r[(i, i)].re;
        }
        x
    }

    /// `R^{-*} A R^{-1}` for Hermitian `A`.
    pub fn reduce(&self, a: &HermitianMatrix) -> Result<HermitianMatrix, LinalgError> {
        let n = self.r.rows();
        // Y = R^{-*} A, then C = (R^{-*} Y*)* = R^{-*} A R^{-1}.
        let mut y = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            y.set_column(j, &self.solve_lower(&a.matrix().column(j)));
        }
        let y_adj = y.adjoint();
        let mut c = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            c.set_column(j, &self.solve_lower(&y_adj.column(j)));
        }
        HermitianMatrix::new(c.adjoint())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_norm;
    use crate::random::{random_complex_vec, random_hermitian, seeded_rng};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_and_diagonal() {
        let b = vec![C64::new(1.0, 2.0), C64::new(-3.0, 0.5)];
        let x = solve_hermitian(&HermitianMatrix::identity(2), c(0.0), &b).unwrap();
        assert_eq!(x, b);

        let d = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]);
        let x = solve_hermitian(&d, c(0.0), &[c(1.0), c(1.0)]).unwrap();
        assert!((x[0] - c(1.0)).norm() < 1e-15 && (x[1] - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn shifted_laplacian_block() {
        // (A + I) x = (1, 0) with A = [[1,-1],[-1,1]] gives x = (2/3, 1/3)
        let a = ComplexMatrix::from_rows(&[vec![c(1.0), c(-1.0)], vec![c(-1.0), c(1.0)]]).unwrap();
        let x = solve_hermitian(&HermitianMatrix::new(a).unwrap(), c(-1.0), &[c(1.0), c(0.0)]).unwrap();
        assert!((x[0] - c(2.0 / 3.0)).norm() < 1e-15);
        assert!((x[1] - c(1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_pivot_is_reported() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0), c(-1.0)], vec![c(-1.0), c(1.0)]]).unwrap();
        let err = solve_hermitian(&HermitianMatrix::new(a).unwrap(), c(0.0), &[c(1.0), c(0.0)]).unwrap_err();
        assert!(matches!(err, LinalgError::Singular { column: 1, .. }));
    }

    #[test]
    fn random_residuals_up_to_500() {
        let mut rng = seeded_rng(3);
        for &n in &[1usize, 4, 30, 120, 500] {
            let a = random_hermitian(&mut rng, n);
            let b = random_complex_vec(&mut rng, n);
            let shift = C64::new(0.3, 0.7);
            let x = solve_hermitian(&a, shift, &b).unwrap();
            let ax = a.matrix().shift_diagonal(-shift).mul_vec(&x);
            let r: Vec<C64> = ax.iter().zip(&b).map(|(p, q)| p - q).collect();
            assert!(vec_norm(&r) <= 1e-10 * (1.0 + vec_norm(&b)), "n={n} residual {}", vec_norm(&r));
        }
    }

    #[test]
    fn cholesky_reduction_preserves_generalised_spectrum() {
        let mut rng = seeded_rng(5);
        let n = 6;
        let g = random_hermitian(&mut rng, n);
        // M = G G* + I is positive definite
        let m = HermitianMatrix::new(g.matrix().matmul(&g.matrix().adjoint()).shift_diagonal(c(1.0))).unwrap();
        let k = random_hermitian(&mut rng, n);
        let chol = cholesky(&m).unwrap();
        let r = chol.factor();
        let rebuilt = r.adjoint().matmul(r);
        assert!(rebuilt.sub(m.matrix()).max_abs() < 1e-12);

        let reduced = chol.reduce(&k).unwrap();
        let eig = crate::linalg::hermitian_eig(&reduced).unwrap();
        // each (lambda, R^{-1} y) solves K x = lambda M x
        for idx in 0..n {
            let x = chol.solve_upper(&eig.eigenvector(idx));
            let kx = k.matrix().mul_vec(&x);
            let mx = m.matrix().mul_vec(&x);
            let res: Vec<C64> = kx.iter().zip(&mx).map(|(a, b)| a - b * eig.eigenvalues[idx]).collect();
            assert!(vec_norm(&res) < 1e-10 * (1.0 + vec_norm(&kx)));
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(cholesky(&a), Err(LinalgError::NotPositiveDefinite { column: 1, .. })));
    }
}
