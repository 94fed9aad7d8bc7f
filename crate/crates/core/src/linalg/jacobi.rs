use super::{ComplexMatrix, HermitianMatrix, LinalgError, C64};

const MAX_SWEEPS: usize = 100;
const REL_TOL: f64 = 1e-14;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Cyclic complex Jacobi eigensolver.
///
/// Sweeps visit the pairs `(p, q)`, `p < q`, in row-major order. Each
/// rotation first removes the phase of `a_pq` and then applies the real
/// symmetric Schur rotation, so the 2x2 unitary is
/// `[[c, s], [-s e^{-i phi}, c e^{-i phi}]]`.
pub fn hermitian_eig(a: &HermitianMatrix) -> Result<EigenDecomposition, LinalgError> {
    let n = a.dim();
    let mut m = a.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let fro = m.frobenius_norm();
    let tol = REL_TOL * fro;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if n <= 1 || off <= tol {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Entries far below the diagonal scale are rounding noise.
                if sweeps > 3 && app.abs() + 100.0 * r == app.abs() && aqq.abs() + 100.0 * r == aqq.abs() {
                    m[(p, q)] = C64::new(0.0, 0.0);
                    m[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                rotate(&mut m, &mut v, p, q, app, aqq, apq);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, app: f64, aqq: f64, apq: C64) {
    let n = m.rows();
    let r = apq.norm();
    let phase = apq / r; // e^{i phi}
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = phase.conj(); // e^{-i phi}
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = -e * s;
    let u_qq = e * c;

    // A <- A U (columns p, q)
    for i in 0..n {
        let aip = m[(i, p)];
        let aiq = m[(i, q)];
        m[(i, p)] = aip * u_pp + aiq * u_qp;
        m[(i, q)] = aip * u_pq + aiq * u_qq;
    }
    // A <- U* A (rows p, q)
    for j in 0..n {
        let apj = m[(p, j)];
        let aqj = m[(q, j)];
        m[(p, j)] = u_pp.conj() * apj + u_qp.conj() * aqj;
        m[(q, j)] = u_pq.conj() * apj + u_qq.conj() * aqj;
    }
    m[(p, p)] = C64::new(app - t * r, 0.0);
    m[(q, q)] = C64::new(aqq + t * r, 0.0);
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * u_pp + viq * u_qp;
        v[(i, q)] = vip * u_pq + viq * u_qq;
    }
}
