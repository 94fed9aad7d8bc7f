use num_complex::Complex64;

use super::KreinError;
use crate::linalg::{inertia, ComplexMatrix, HermitianMatrix, LinalgError, LuFactorization};
use crate::vertex_space::{Coupling, VertexSpace};

/// Matrices `A`, `B` on slot space with vertex conditions `A f̄ + B f⃗' = 0`,
/// built as `A = E L E* + E⊥ E⊥*`, `B = E E*` for the isometries `E`, `E⊥`
/// onto 𝒢 and 𝒢^⊥.
#[derive(Debug, Clone)]
pub struct AbParameters {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    /// Unitary `[E | E⊥]` whose columns form the adapted basis.
    pub adapted_basis: ComplexMatrix,
    /// dim 𝒢: the first `dim` adapted basis vectors span 𝒢.
    pub dim: usize,
}

impl AbParameters {
    /// `(U* A U, U* B U)` for the adapted basis `U`.
    pub fn in_adapted_basis(&self) -> (ComplexMatrix, ComplexMatrix) {
        let u = &self.adapted_basis;
        let ua = u.adjoint();
        (ua.matmul(&self.a).matmul(u), ua.matmul(&self.b).matmul(u))
    }
}

pub fn ab_parameters(vs: &VertexSpace, l: &Coupling) -> Result<AbParameters, KreinError> {
    if l.dim() != vs.dim() {
        return Err(KreinError::Dimension(format!(
            "coupling of dimension {} on a vertex space of dimension {}",
            l.dim(),
            vs.dim()
        )));
    }
    let e = vs.embedding();
    let e_perp = vs.dual_space().embedding();
    let a = e
        .matmul(l.matrix().matrix())
        .matmul(&e.adjoint())
        .add(&e_perp.matmul(&e_perp.adjoint()));
    let b = e.matmul(&e.adjoint());

    // [A | B] is onto iff A A* + B B* is positive definite.
    let gram = HermitianMatrix::new(a.matmul(&a.adjoint()).add(&b.matmul(&b.adjoint())))?;
    let n = gram.dim();
    let i = inertia(&gram);
    if i.positive != n {
        let smallest = crate::linalg::lowest_eigenvalues(&gram, 1).first().copied().unwrap_or(0.0);
        return Err(KreinError::Rank(smallest.max(0.0).sqrt()));
    }
    let ab = a.matmul(&b.adjoint());
    let defect = ab.sub(&ab.adjoint()).max_abs();
    if defect > 1e-10 * (1.0 + ab.max_abs()) {
        return Err(KreinError::Linalg(LinalgError::Dimension(format!(
            "A B* is not Hermitian (defect {defect:e})"
        ))));
    }

    let mut adapted = ComplexMatrix::zeros(e.rows(), e.cols() + e_perp.cols());
    for k in 0..e.cols() {
        adapted.set_column(k, &e.column(k));
    }
    for k in 0..e_perp.cols() {
        adapted.set_column(e.cols() + k, &e_perp.column(k));
    }
    Ok(AbParameters {
        a,
        b,
        adapted_basis: adapted,
        dim: vs.dim(),
    })
}

/// `S(μ) = −(A + iμB)^{-1}(A − iμB)` in slot coordinates.
pub fn scattering_matrix(vs: &VertexSpace, l: &Coupling, mu: f64) -> Result<ComplexMatrix, KreinError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(KreinError::NonPositiveMu(mu));
    }
    let ab = ab_parameters(vs, l)?;
    let imu = Complex64::new(0.0, mu);
    let plus = ab.a.add(&ab.b.scale(imu));
    let minus = ab.a.sub(&ab.b.scale(imu));
    let lu = LuFactorization::new(&plus).map_err(|source| KreinError::SingularScattering { mu, source })?;
    Ok(lu.solve_matrix(&minus).scale(Complex64::new(-1.0, 0.0)))
}

/// `max |S* S − I|`.
pub fn unitarity_defect(s: &ComplexMatrix) -> f64 {
    s.adjoint().matmul(s).sub(&ComplexMatrix::identity(s.cols())).max_abs()
}
