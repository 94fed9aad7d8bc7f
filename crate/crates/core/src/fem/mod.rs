//! Piecewise-linear finite elements for the metric Laplacian with vertex
//! conditions `(𝒢, L)`.
//!
//! The conditions enter through the quadratic form
//! `∫ |f'|² − ⟨L f̄, f̄⟩` on functions with `f̄ ∈ 𝒢`, so the discretisation
//! never touches the Q-function or the boundary-value map. It serves as an
//! independent check of everything in [`crate::spectral`].

mod convergence;
mod resolvent;
mod system;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::vertex_space::VertexSpaceError;

pub use convergence::{
    compare_with_oracle, fem_spectrum, fem_spectrum_range, oracle_clusters, unmatched_oracle_values,
    ConvergenceReport, OracleMatch,
};
pub use resolvent::{fem_dirichlet_resolvent_apply, fem_resolvent_apply, load_vector, sample_solution};
pub use system::FemSystem;

/// Default mesh size.
pub const DEFAULT_H: f64 = 1.0 / 128.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("mesh size must be positive and finite, got {0}")]
    InvalidMesh(f64),
    #[error("mesh size {h} too large: need h <= {limit} (a quarter of the shortest edge)")]
    MeshTooCoarse { h: f64, limit: f64 },
    #[error("coupling of dimension {found} on a vertex space of dimension {expected}")]
    CouplingDimension { expected: usize, found: usize },
    #[error("asked for {count} eigenvalues, at most {limit} available")]
    CountTooLarge { count: usize, limit: usize },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("right-hand side has samples for {found} edges, graph has {edges}")]
    RhsShape { edges: usize, found: usize },
    #[error("could not bracket eigenvalue {0}")]
    NoBracket(usize),
    #[error("K - zM is singular at z = {z}: {source}")]
    SingularResolvent { z: Complex64, source: LinalgError },
    #[error(transparent)]
    VertexSpace(#[from] VertexSpaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl FemError {
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            FemError::InvalidMesh(_)
                | FemError::MeshTooCoarse { .. }
                | FemError::CouplingDimension { .. }
                | FemError::CountTooLarge { .. }
                | FemError::InvalidRange { .. }
                | FemError::RhsShape { .. }
                | FemError::VertexSpace(_)
        )
    }
}
