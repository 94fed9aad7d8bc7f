use num_complex::Complex64;

use super::functions::{eval_cs, eval_cs_real};
use super::{KreinError, POLE_WINDOW};
use crate::discrete::delta0;
use crate::graph::{End, MetricGraph};
use crate::linalg::{ComplexMatrix, HermitianMatrix, LinalgError};
use crate::vertex_space::VertexSpace;

/// Q-function value at one spectral point.
#[derive(Debug, Clone)]
pub struct QEvaluation {
    pub z: Complex64,
    /// Q(z) in the 𝒢-basis.
    pub q: ComplexMatrix,
    /// Per edge: `|s(z ℓ_e²)| ≤ 1e-8`.
    pub pole_flags: Vec<bool>,
}

impl QEvaluation {
    /// Q(z) as a Hermitian matrix (meaningful for real `z`).
    pub fn hermitian(&self) -> Result<HermitianMatrix, LinalgError> {
        HermitianMatrix::new(self.q.clone())
    }

    /// `max |Q − Q*|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.q.sub(&self.q.adjoint()).max_abs()
    }
}

/// Precomputed data for repeated Q(z) evaluations on one graph.
///
/// In slot coordinates every edge contributes the block
/// `(1/(ℓ s(zℓ²))) [[c(zℓ²), −1], [−1, c(zℓ²)]]` on its (tail, head) slots;
/// Q(z) is that matrix compressed to 𝒢.
#[derive(Debug, Clone)]
pub struct QFunction {
    lengths: Vec<f64>,
    ids: Vec<u64>,
    /// Per edge: rows of the embedding at the tail and head slots.
    tail_rows: Vec<Vec<Complex64>>,
    head_rows: Vec<Vec<Complex64>>,
    dim: usize,
}

impl QFunction {
    pub fn new(g: &MetricGraph, vs: &VertexSpace) -> Self {
        let emb = vs.embedding();
        let slots = vs.slots();
        let row = |i: usize| emb.row(i).to_vec();
        Self {
            lengths: g.edges().iter().map(|e| e.length).collect(),
            ids: g.edges().iter().map(|e| e.id).collect(),
            tail_rows: (0..g.edge_count()).map(|e| row(slots.index_of(e, End::Tail))).collect(),
            head_rows: (0..g.edge_count()).map(|e| row(slots.index_of(e, End::Head))).collect(),
            dim: vs.dim(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Edges whose pole window contains `z`.
    pub fn pole_flags(&self, z: Complex64) -> Vec<bool> {
        self.lengths
            .iter()
            .map(|&l| eval_cs(z * (l * l)).1.norm() <= POLE_WINDOW)
            .collect()
    }

    fn assemble(&self, coefs: impl Fn(f64) -> (Complex64, Complex64)) -> ComplexMatrix {
        let n = self.dim;
        let mut q = ComplexMatrix::zeros(n, n);
        for e in 0..self.lengths.len() {
            let (diag, off) = coefs(self.lengths[e]);
            let t = &self.tail_rows[e];
            let h = &self.head_rows[e];
            for k in 0..n {
                let (tk, hk) = (t[k].conj(), h[k].conj());
                if tk == Complex64::new(0.0, 0.0) && hk == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for l in 0..n {
                    q[(k, l)] += diag * (tk * t[l] + hk * h[l]) + off * (tk * h[l] + hk * t[l]);
                }
            }
        }
        q
    }

    pub fn eval(&self, z: Complex64) -> Result<QEvaluation, KreinError> {
        let pole_flags = self.pole_flags(z);
        if pole_flags.iter().any(|&p| p) {
            return Err(self.pole_error(z, &pole_flags));
        }
        let q = self.assemble(|l| {
            let (c, s) = eval_cs(z * (l * l));
            let inv = 1.0 / (s * l);
            (c * inv, -inv)
        });
        Ok(QEvaluation { z, q, pole_flags })
    }

    /// Q(λ) for real λ, in real arithmetic.
    pub fn eval_real(&self, lambda: f64) -> Result<HermitianMatrix, KreinError> {
        let flags: Vec<bool> = self
            .lengths
            .iter()
            .map(|&l| eval_cs_real(lambda * l * l).1.abs() <= POLE_WINDOW)
            .collect();
        if flags.iter().any(|&p| p) {
            return Err(self.pole_error(Complex64::new(lambda, 0.0), &flags));
        }
        let q = self.assemble(|l| {
            let (c, s) = eval_cs_real(lambda * l * l);
            let inv = 1.0 / (s * l);
            (Complex64::new(c * inv, 0.0), Complex64::new(-inv, 0.0))
        });
        Ok(HermitianMatrix::new(q)?)
    }

    fn pole_error(&self, z: Complex64, flags: &[bool]) -> KreinError {
        KreinError::PoleWindow {
            z,
            edges: self.ids.iter().zip(flags).filter(|(_, &p)| p).map(|(&id, _)| id).collect(),
        }
    }
}

/// Q(z) for arbitrary edge lengths.
pub fn q_general(g: &MetricGraph, vs: &VertexSpace, z: Complex64) -> Result<QEvaluation, KreinError> {
    QFunction::new(g, vs).eval(z)
}

pub(crate) fn require_equilateral(g: &MetricGraph) -> Result<(), KreinError> {
    match g.edges().iter().find(|e| (e.length - 1.0).abs() > 1e-12) {
        Some(e) => Err(KreinError::NotEquilateral {
            edge: e.id,
            length: e.length,
        }),
        None => Ok(()),
    }
}

/// `Q(z) = (Δ_𝒢 − (1 − c(z)) I) / s(z)` on a unit graph.
pub fn q_equilateral(g: &MetricGraph, vs: &VertexSpace, z: Complex64) -> Result<QEvaluation, KreinError> {
    require_equilateral(g)?;
    let (c, s) = eval_cs(z);
    let pole = s.norm() <= POLE_WINDOW;
    let pole_flags = vec![pole; g.edge_count()];
    if pole {
        return Err(KreinError::PoleWindow {
            z,
            edges: g.edges().iter().map(|e| e.id).collect(),
        });
    }
    let lap = delta0(g, vs);
    let q = lap.into_matrix().shift_diagonal(c - 1.0).scale(1.0 / s);
    Ok(QEvaluation { z, q, pole_flags })
}

/// Dirac Q-function `Q_D(w) = Q(w² − m²) / (w + m)`.
pub fn q_dirac(g: &MetricGraph, vs: &VertexSpace, w: Complex64, m: f64) -> Result<QEvaluation, KreinError> {
    let denom = w + m;
    if denom.norm() <= 1e-14 * (1.0 + m.abs()) {
        return Err(KreinError::DiracPole { w });
    }
    let mut eval = q_general(g, vs, w * w - m * m)?;
    eval.q = eval.q.scale(1.0 / denom);
    eval.z = w;
    Ok(eval)
}
