use super::{HermitianMatrix, C64};

/// Real symmetric tridiagonal matrix unitarily similar to a Hermitian input.
///
/// Off-diagonals of a Hermitian tridiagonal matrix can be made real by a
/// diagonal phase similarity, so only their moduli are kept.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// Householder reduction, `A <- H A H` with `H = I - 2 v v*`.
    pub fn from_hermitian(a: &HermitianMatrix) -> Self {
        let n = a.dim();
        let mut m: Vec<C64> = a.matrix().as_slice().to_vec();
        let idx = |i: usize, j: usize| i * n + j;
        let mut off = Vec::with_capacity(n.saturating_sub(1));
        for k in 0..n.saturating_sub(1) {
            let len = n - k - 1;
            let mut v: Vec<C64> = (0..len).map(|i| m[idx(k + 1 + i, k)]).collect();
            let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let tail_norm = v.iter().skip(1).map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if tail_norm == 0.0 {
                off.push(v[0].norm());
                continue;
            }
            let phase = if v[0].norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                v[0] / v[0].norm()
            };
            let alpha = -phase * xnorm;
            v[0] -= alpha;
            let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in &mut v {
                *z /= vnorm;
            }
            // p = B v on the trailing block B = m[k+1.., k+1..]
            let mut p = vec![C64::new(0.0, 0.0); len];
            for (i, pi) in p.iter_mut().enumerate() {
                let row = &m[idx(k + 1 + i, k + 1)..idx(k + 1 + i, n)];
                *pi = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            }
            let kappa: C64 = v.iter().zip(&p).map(|(a, b)| a.conj() * b).sum();
            let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kappa.re).collect();
            for i in 0..len {
                for j in 0..len {
                    let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                    m[idx(k + 1 + i, k + 1 + j)] -= upd * 2.0;
                }
            }
            off.push(alpha.norm());
            for i in 0..len {
                m[idx(k + 1 + i, k)] = C64::new(0.0, 0.0);
                m[idx(k, k + 1 + i)] = C64::new(0.0, 0.0);
            }
        }
        let diag = (0..n).map(|i| m[idx(i, i)].re).collect();
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        let scale = self.norm_bound().max(f64::MIN_POSITIVE);
        for i in 0..self.dim() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * scale;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Number of eigenvalues strictly above `x`.
    pub fn count_above(&self, x: f64) -> usize {
        let negated = Tridiagonal {
            diag: self.diag.iter().map(|d| -d).collect(),
            off: self.off.clone(),
        };
        negated.count_below(-x)
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let left = if i > 0 { self.off[i - 1] } else { 0.0 };
                let right = self.off.get(i).copied().unwrap_or(0.0);
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn kth_eigenvalue(&self, k: usize) -> f64 {
        let bound = self.norm_bound();
        let (mut lo, mut hi) = (-bound - 1.0, bound + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Counts of negative, zero and positive eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.negative + self.zero + self.positive
    }
}

/// Inertia with zero band `|lambda| <= 1e-10 (1 + |A|_max)`.
pub fn inertia(a: &HermitianMatrix) -> Inertia {
    let tol = 1e-10 * (1.0 + a.max_abs());
    let t = Tridiagonal::from_hermitian(a);
    let below = t.count_below(-tol);
    let not_above = t.count_below(tol);
    Inertia {
        negative: below,
        zero: not_above - below,
        positive: a.dim() - not_above,
    }
}

/// The `count` smallest eigenvalues, ascending.
pub fn lowest_eigenvalues(a: &HermitianMatrix, count: usize) -> Vec<f64> {
    let t = Tridiagonal::from_hermitian(a);
    (0..count.min(a.dim())).map(|k| t.kth_eigenvalue(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, ComplexMatrix};
    use crate::random::{random_hermitian, random_unitary, seeded_rng};

    #[test]
    fn inertia_of_small_examples() {
        let d = HermitianMatrix::from_real_diagonal(&[-1.0, 0.0, 2.0]);
        assert_eq!(
            inertia(&d),
            Inertia {
                negative: 1,
                zero: 1,
                positive: 1
            }
        );
        let a = ComplexMatrix::from_rows(&[
            vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)],
            vec![C64::new(-1.0, 0.0), C64::new(1.0, 0.0)],
        ])
        .unwrap();
        let i = inertia(&HermitianMatrix::new(a).unwrap());
        assert_eq!((i.negative, i.zero, i.positive), (0, 1, 1));
        assert_eq!(inertia(&HermitianMatrix::zeros(0)).dim(), 0);
    }

    #[test]
    fn tridiagonal_preserves_spectrum() {
        let mut rng = seeded_rng(21);
        for &n in &[1usize, 2, 3, 8, 20] {
            let a = random_hermitian(&mut rng, n);
            let eig = hermitian_eig(&a).unwrap();
            let low = lowest_eigenvalues(&a, n);
            for (x, y) in low.iter().zip(&eig.eigenvalues) {
                assert!((x - y).abs() < 1e-10 * (1.0 + a.max_abs()), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn inertia_matches_eigenvalues_and_congruence() {
        let mut rng = seeded_rng(99);
        for n in 1..12 {
            let a = random_hermitian(&mut rng, n).shifted(0.3);
            let eig = hermitian_eig(&a).unwrap();
            let tol = 1e-10 * (1.0 + a.max_abs());
            let neg = eig.eigenvalues.iter().filter(|&&l| l < -tol).count();
            let pos = eig.eigenvalues.iter().filter(|&&l| l > tol).count();
            let i = inertia(&a);
            assert_eq!((i.negative, i.positive), (neg, pos));

            let u = random_unitary(&mut rng, n);
            assert_eq!(inertia(&a.conjugate_by(&u).unwrap()), i);
        }
    }

    #[test]
    fn counts_above_and_below() {
        let t = Tridiagonal::from_hermitian(&HermitianMatrix::from_real_diagonal(&[-2.0, 0.5, 3.0, 3.0]));
        assert_eq!(t.count_below(0.0), 1);
        assert_eq!(t.count_above(0.0), 3);
        assert_eq!(t.count_above(3.5), 0);
        assert_eq!(t.count_above(2.9), 2);
    }
}
