//! Exterior derivative `d_𝒢` and the generalised discrete Laplacians
//! `Δ_𝒢 = d* d` (0-forms) and `Δ¹_𝒢 = d d*` (1-forms).
//!
//! Edge coordinates are orthonormalised, `ê_e = √ℓ_e · 1_e`, so the weighted
//! inner product on ℓ₂(E) becomes Euclidean and adjoints are conjugate
//! transposes.

use thiserror::Error;

use crate::graph::{End, MetricGraph};
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianMatrix, LinalgError};
use crate::vertex_space::VertexSpace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscreteError {
    #[error("supersymmetry check needs unit edge lengths (edge {edge} has length {length})")]
    NotEquilateral { edge: u64, length: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `d_𝒢`, shape `|E| × dim 𝒢`: entry `(e, k) = (b_k(e,+) − b_k(e,−)) / √ℓ_e`.
pub fn assemble_d(g: &MetricGraph, vs: &VertexSpace) -> ComplexMatrix {
    let slots = vs.slots();
    let emb = vs.embedding();
    ComplexMatrix::from_fn(g.edge_count(), vs.dim(), |e, k| {
        let head = emb[(slots.index_of(e, End::Head), k)];
        let tail = emb[(slots.index_of(e, End::Tail), k)];
        (head - tail) / g.edge(e).length.sqrt()
    })
}

/// `Δ_𝒢 = d* d` on 𝒢.
pub fn delta0(g: &MetricGraph, vs: &VertexSpace) -> HermitianMatrix {
    let d = assemble_d(g, vs);
    HermitianMatrix::new(d.adjoint().matmul(&d)).expect("square")
}

/// `Δ¹_𝒢 = d d*` on ℓ₂(E).
pub fn delta1(g: &MetricGraph, vs: &VertexSpace) -> HermitianMatrix {
    let d = assemble_d(g, vs);
    HermitianMatrix::new(d.matmul(&d.adjoint())).expect("square")
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn spectrum(a: &HermitianMatrix) -> Result<Vec<f64>, LinalgError> {
    Ok(hermitian_eig(a)?.eigenvalues)
}

/// Pairwise comparison of sorted lists.
pub fn multisets_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

#[derive(Debug, Clone)]
pub struct SupersymmetryReport {
    /// spec Δ_𝒢 without values near 0 and 2.
    pub primal: Vec<f64>,
    /// spec Δ_{𝒢^⊥} without values near 0 and 2.
    pub dual: Vec<f64>,
    /// `2 − primal`, sorted.
    pub reflected: Vec<f64>,
    pub pass: bool,
}

const STRIP_TOL: f64 = 1e-8;

fn strip(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .copied()
        .filter(|x| x.abs() > STRIP_TOL && (x - 2.0).abs() > STRIP_TOL)
        .collect()
}

/// Checks `spec Δ_{𝒢^⊥} ∖ {0,2} = 2 − (spec Δ_𝒢 ∖ {0,2})` on a unit graph.
pub fn check_supersymmetry(g: &MetricGraph, vs: &VertexSpace) -> Result<SupersymmetryReport, DiscreteError> {
    if let Some(e) = g.edges().iter().find(|e| (e.length - 1.0).abs() > 1e-12) {
        return Err(DiscreteError::NotEquilateral {
            edge: e.id,
            length: e.length,
        });
    }
    let primal = strip(&spectrum(&delta0(g, vs))?);
    let dual = strip(&spectrum(&delta0(g, &vs.dual_space()))?);
    let mut reflected: Vec<f64> = primal.iter().map(|x| 2.0 - x).collect();
    reflected.sort_by(f64::total_cmp);
    let pass = multisets_match(&dual, &reflected, STRIP_TOL);
    Ok(SupersymmetryReport {
        primal,
        dual,
        reflected,
        pass,
    })
}
