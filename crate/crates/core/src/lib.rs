//! Spectra of Laplace and Dirac operators on metric graphs with general
//! self-adjoint vertex conditions.
//!
//! Vertex conditions are given by a vertex space 𝒢 (the admissible vectors
//! of endpoint values at each vertex) and a Hermitian coupling operator `L`
//! on 𝒢: `f̄ ∈ 𝒢` and `P f⃗' = L f̄`. The crate computes
//!
//! * generalised discrete Laplacians `Δ_𝒢 = d* d` ([`discrete`]),
//! * the boundary-value map β(z) and the Q-function (Dirichlet-to-Neumann
//!   map) of the metric graph ([`krein`]),
//! * metric-graph spectra via the transfer map, a spectral-flow scan of
//!   `Q(λ) - L`, and Dirac variants ([`spectral`]),
//! * an independent finite-element discretisation used to check all of the
//!   above ([`fem`]).

pub mod discrete;
pub mod fem;
pub mod graph;
pub mod krein;
pub mod linalg;
pub mod random;
pub mod spectral;
pub mod vertex_space;

use thiserror::Error;

pub use graph::{GraphDocument, MetricGraph};
pub use linalg::{ComplexMatrix, HermitianMatrix, C64};
pub use vertex_space::{Coupling, VertexSpace};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error(transparent)]
    VertexSpace(#[from] vertex_space::VertexSpaceError),
    #[error(transparent)]
    Discrete(#[from] discrete::DiscreteError),
    #[error(transparent)]
    Krein(#[from] krein::KreinError),
    #[error(transparent)]
    Spectral(#[from] spectral::SpectralError),
    #[error(transparent)]
    Fem(#[from] fem::FemError),
}

impl Error {
    /// Input errors are problems with the graph description or parameters;
    /// everything else is a numerical failure.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Graph(_) | Error::VertexSpace(_) => true,
            Error::Discrete(e) => matches!(e, discrete::DiscreteError::NotEquilateral { .. }),
            Error::Krein(e) => e.is_input_error(),
            Error::Spectral(e) => e.is_input_error(),
            Error::Fem(e) => e.is_input_error(),
            Error::Linalg(_) => false,
        }
    }
}
