//! Boundary-value map β(z), Q-functions and the (A, B) parametrisation of
//! vertex conditions.
//!
//! For `z` off the decoupled Dirichlet spectrum, β(z) maps a vector `F ∈ 𝒢`
//! to the edgewise solution of `−f'' = z f` with endpoint values `F`, and
//! `Q(z) F = P f⃗'(·)` is its oriented derivative trace projected back to 𝒢
//! (the Dirichlet-to-Neumann map). `z` is an eigenvalue of the metric
//! Laplacian with conditions `(𝒢, L)` exactly when `Q(z) − L` is singular.

mod boundary;
mod functions;
mod gamma;
mod qfunction;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::LinalgError;

pub use boundary::{ab_parameters, scattering_matrix, unitarity_defect, AbParameters};
pub use functions::{eval_cs, eval_cs_derivative_real, eval_cs_real};
pub use gamma::{beta_adjoint_apply, beta_apply, beta_dirac_apply, l2_inner, DiracSample, EigenfunctionSample};
pub use qfunction::{q_dirac, q_equilateral, q_general, QEvaluation, QFunction};

/// `|s(z ℓ²)|` at or below this value marks a pole of the Q-function.
pub const POLE_WINDOW: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KreinError {
    #[error("z = {z} lies in the Dirichlet pole window of edges {edges:?}")]
    PoleWindow { z: Complex64, edges: Vec<u64> },
    #[error("equilateral formula needs unit edge lengths (edge {edge} has length {length})")]
    NotEquilateral { edge: u64, length: f64 },
    #[error("Dirac Q-function is singular at w = -m (w = {w})")]
    DiracPole { w: Complex64 },
    #[error("scattering matrix needs mu > 0, got {0}")]
    NonPositiveMu(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("(A, B) rank check failed: smallest singular value {0:e}")]
    Rank(f64),
    #[error("singular solve at mu = {mu}: {source}")]
    SingularScattering { mu: f64, source: LinalgError },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl KreinError {
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            KreinError::PoleWindow { .. }
                | KreinError::NotEquilateral { .. }
                | KreinError::DiracPole { .. }
                | KreinError::NonPositiveMu(_)
                | KreinError::Dimension(_)
        )
    }
}
