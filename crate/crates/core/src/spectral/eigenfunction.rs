use num_complex::Complex64;

use super::SpectralError;
use crate::graph::MetricGraph;
use crate::krein::{beta_apply, EigenfunctionSample, QFunction};
use crate::linalg::{hermitian_eig, vec_norm};
use crate::vertex_space::{Coupling, VertexSpace};

/// Basis of the eigenspace at `λ`: `β(λ)` applied to an orthonormal basis
/// of `ker(Q(λ) − L)`, sampled at `samples + 1` points per edge.
///
/// A direction counts as null when its eigenvalue is at most
/// `1e-8 max(|Q(λ) − L|, 1)` in modulus.
pub fn eigenfunction(
    g: &MetricGraph,
    vs: &VertexSpace,
    l: &Coupling,
    lambda: f64,
    samples: usize,
) -> Result<Vec<EigenfunctionSample>, SpectralError> {
    super::require_coupling(vs, l)?;
    let m = QFunction::new(g, vs).eval_real(lambda)?.combine(1.0, l.matrix(), -1.0);
    let eig = hermitian_eig(&m)?;
    let norm = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let tol = 1e-8 * norm.max(1.0);
    let z = Complex64::new(lambda, 0.0);
    let mut out = Vec::new();
    for (k, &value) in eig.eigenvalues.iter().enumerate() {
        if value.abs() <= tol {
            out.push(beta_apply(g, vs, z, &eig.eigenvector(k), samples)?);
        }
    }
    if out.is_empty() {
        let smallest = eig.eigenvalues.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        return Err(SpectralError::NotAnEigenvalue { lambda, smallest });
    }
    Ok(out)
}

/// `|P f⃗' − L f̄|` in 𝒢-coordinates.
pub fn vertex_condition_residual(f: &EigenfunctionSample, vs: &VertexSpace, l: &Coupling) -> f64 {
    let lf = l.matrix().matrix().mul_vec(&f.trace_coordinates(vs));
    let diff: Vec<Complex64> = f
        .derivative_coordinates(vs)
        .iter()
        .zip(&lf)
        .map(|(a, b)| a - b)
        .collect();
    vec_norm(&diff)
}
