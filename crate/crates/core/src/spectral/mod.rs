//! Eigenvalue lists for the metric Laplacian and Dirac operators.
//!
//! Three routes are available: the transfer map on unit graphs with scalar
//! coupling, a spectral-flow scan of `Q(λ) − L` for arbitrary lengths and
//! couplings, and scalar root finding for the Dirac relations. Points of the
//! decoupled Dirichlet spectrum are never classified here; they are emitted
//! as exceptional candidates for the finite-element oracle to decide.

mod dirac;
mod eigenfunction;
mod point;
mod scan;
mod transfer;

use thiserror::Error;

use crate::graph::MetricGraph;
use crate::krein::KreinError;
use crate::linalg::{hermitian_eig, HermitianMatrix, LinalgError};
use crate::vertex_space::{Coupling, VertexSpace};

pub use dirac::{dirac_spectrum, dirac_sym_spectrum, sym_pair_function, SymPoint};
pub use eigenfunction::{eigenfunction, vertex_condition_residual};
pub use point::{cluster, dirichlet_points, expand, pole_window, segments_avoiding, sort_points, Source, SpectralPoint};
pub use scan::{metric_spectrum_scan, DEFAULT_GRID};
pub use transfer::{
    metric_spectrum_equilateral, transfer_derivative, transfer_forward, transfer_inverse, transfer_inverse_range,
    TransferRoot,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("unit edge lengths required (edge {edge} has length {length}); use the scan for general lengths")]
    NotEquilateral { edge: u64, length: f64 },
    #[error("coupling is not a multiple of the identity; use the scan for general couplings")]
    NonScalarCoupling,
    #[error("coupling of dimension {found} on a vertex space of dimension {expected}")]
    CouplingDimension { expected: usize, found: usize },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("grid density must be positive, got {0}")]
    InvalidGrid(f64),
    #[error("{lambda} is not an eigenvalue at tolerance (smallest |eigenvalue| of Q - L is {smallest:e})")]
    NotAnEigenvalue { lambda: f64, smallest: f64 },
    #[error(transparent)]
    Krein(#[from] KreinError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl SpectralError {
    pub fn is_input_error(&self) -> bool {
        match self {
            SpectralError::Krein(e) => e.is_input_error(),
            SpectralError::Linalg(_) => false,
            _ => true,
        }
    }
}

pub(crate) fn require_unit(g: &MetricGraph) -> Result<(), SpectralError> {
    match g.edges().iter().find(|e| (e.length - 1.0).abs() > 1e-12) {
        Some(e) => Err(SpectralError::NotEquilateral {
            edge: e.id,
            length: e.length,
        }),
        None => Ok(()),
    }
}

pub(crate) fn require_range(lo: f64, hi: f64) -> Result<(), SpectralError> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(SpectralError::InvalidRange { lo, hi })
    }
}

pub(crate) fn require_coupling(vs: &VertexSpace, l: &Coupling) -> Result<(), SpectralError> {
    if l.dim() == vs.dim() {
        Ok(())
    } else {
        Err(SpectralError::CouplingDimension {
            expected: vs.dim(),
            found: l.dim(),
        })
    }
}

/// Eigenvalues of a discrete Laplacian grouped with tolerance `1e-8`.
pub fn discrete_spectrum(lap: &HermitianMatrix) -> Result<Vec<SpectralPoint>, SpectralError> {
    let eig = hermitian_eig(lap)?;
    Ok(cluster(&eig.eigenvalues, 1e-8)
        .into_iter()
        .map(|(value, count)| {
            let spread = eig
                .eigenvalues
                .iter()
                .filter(|x| (*x - value).abs() <= 1e-8 * count as f64)
                .map(|x| (x - value).abs())
                .fold(0.0, f64::max);
            SpectralPoint::new(value, count, Source::Oracle, spread)
        })
        .collect())
}
