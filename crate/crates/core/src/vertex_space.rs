//! Vertex spaces 𝒢 = ⊕_v 𝒢_v ⊆ ⊕_v ℂ^{E_v} and coupling operators on them.
//!
//! A vertex space is stored as one orthonormal basis per vertex, each basis
//! vector given by its coordinates in the canonical slot order of that
//! vertex. The global basis of 𝒢 is the concatenation over vertices, and all
//! operators on 𝒢 (discrete Laplacians, Q-functions, couplings) are matrices
//! in this basis.

use thiserror::Error;

use crate::graph::{CouplingDecl, MetricGraph, SlotIndexing, SpaceDecl};
use crate::linalg::{hermitian_eig, vec_dot, vec_norm, ComplexMatrix, HermitianMatrix, LinalgError, C64};

const DROP_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VertexSpaceError {
    #[error("expected {expected} vertex declarations, got {got}")]
    DeclarationCount { expected: usize, got: usize },
    #[error("vertex {vertex}: custom row has {got} entries, degree is {degree}")]
    RowLength { vertex: usize, got: usize, degree: usize },
    #[error("coupling matrix is {got}x{got} but the vertex space has dimension {dim}")]
    CouplingDimension { got: usize, dim: usize },
    #[error("coupling matrix is not Hermitian (deviation {0:e})")]
    CouplingNotHermitian(f64),
    #[error("coupling matrix rows are ragged")]
    CouplingRagged,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Orthonormal per-vertex bases of a local vertex space.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSpace {
    slots: SlotIndexing,
    bases: Vec<Vec<Vec<C64>>>,
    offsets: Vec<usize>,
    warnings: Vec<String>,
}

/// Per-vertex orthogonal projections and their block-diagonal sum.
#[derive(Debug, Clone)]
pub struct Projection {
    pub per_vertex: Vec<HermitianMatrix>,
    pub global: HermitianMatrix,
}

/// Diagonal ±1 on slots: −1 at tails, +1 at heads.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedIdentity {
    pub signs: Vec<f64>,
}

impl SignedIdentity {
    pub fn orientation(slots: &SlotIndexing) -> Self {
        Self {
            signs: slots.slots().iter().map(|s| s.end.sign()).collect(),
        }
    }

    pub fn all_positive(slot_count: usize) -> Self {
        Self {
            signs: vec![1.0; slot_count],
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.signs)
    }
}

/// Modified Gram–Schmidt with one re-orthogonalisation pass. Rows whose
/// residual falls to `DROP_TOL` times their original norm are dropped.
fn orthonormalize(rows: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for row in rows {
        let norm0 = vec_norm(row);
        if norm0 == 0.0 {
            continue;
        }
        let mut r = row.clone();
        for _ in 0..2 {
            for b in &basis {
                let coef = vec_dot(b, &r);
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= coef * bi;
                }
            }
        }
        let norm = vec_norm(&r);
        if norm <= DROP_TOL * norm0 {
            continue;
        }
        basis.push(r.into_iter().map(|x| x / norm).collect());
    }
    basis
}

fn unit_rows(deg: usize) -> Vec<Vec<C64>> {
    (0..deg)
        .map(|i| {
            let mut r = vec![C64::new(0.0, 0.0); deg];
            r[i] = C64::new(1.0, 0.0);
            r
        })
        .collect()
}

impl VertexSpace {
    /// Builds the space from per-vertex declarations.
    pub fn build(g: &MetricGraph, decls: &[SpaceDecl]) -> Result<Self, VertexSpaceError> {
        let slots = g.slots();
        if decls.len() != g.vertex_count() {
            return Err(VertexSpaceError::DeclarationCount {
                expected: g.vertex_count(),
                got: decls.len(),
            });
        }
        let mut warnings = Vec::new();
        let mut bases = Vec::with_capacity(decls.len());
        for (v, decl) in decls.iter().enumerate() {
            let deg = slots.degree(v);
            let basis = match decl {
                SpaceDecl::Standard => {
                    let x = C64::new(1.0 / (deg as f64).sqrt(), 0.0);
                    vec![vec![x; deg]]
                }
                SpaceDecl::Dirichlet => Vec::new(),
                SpaceDecl::Neumann => unit_rows(deg),
                SpaceDecl::Custom(rows) => {
                    if let Some(r) = rows.iter().find(|r| r.len() != deg) {
                        return Err(VertexSpaceError::RowLength {
                            vertex: v,
                            got: r.len(),
                            degree: deg,
                        });
                    }
                    let basis = orthonormalize(rows);
                    if basis.len() < rows.len() {
                        warnings.push(format!(
                            "vertex {v}: {} custom rows have numerical rank {}",
                            rows.len(),
                            basis.len()
                        ));
                    }
                    basis
                }
            };
            bases.push(basis);
        }
        Ok(Self::from_bases(slots, bases, warnings))
    }

    /// Standard (continuity) space at every vertex.
    pub fn standard(g: &MetricGraph) -> Self {
        Self::build(g, &vec![SpaceDecl::Standard; g.vertex_count()]).expect("standard declarations are valid")
    }

    fn from_bases(slots: SlotIndexing, bases: Vec<Vec<Vec<C64>>>, warnings: Vec<String>) -> Self {
        let mut offsets = Vec::with_capacity(bases.len() + 1);
        let mut acc = 0;
        for b in &bases {
            offsets.push(acc);
            acc += b.len();
        }
        offsets.push(acc);
        Self {
            slots,
            bases,
            offsets,
            warnings,
        }
    }

    pub fn slots(&self) -> &SlotIndexing {
        &self.slots
    }

    /// dim 𝒢.
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn vertex_dim(&self, v: usize) -> usize {
        self.bases[v].len()
    }

    pub fn vertex_basis(&self, v: usize) -> &[Vec<C64>] {
        &self.bases[v]
    }

    /// Global basis index of the first basis vector at `v`.
    pub fn vertex_offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    /// Rank-deficiency notes collected while orthonormalising custom rows.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Vertex owning global basis vector `k`.
    pub fn basis_vertex(&self, k: usize) -> usize {
        self.offsets.partition_point(|&o| o <= k) - 1
    }

    /// Isometry 𝒢 → ℂ^{slots}: column `k` is basis vector `k` in global slot
    /// coordinates.
    pub fn embedding(&self) -> ComplexMatrix {
        let mut e = ComplexMatrix::zeros(self.slots.slot_count(), self.dim());
        for (v, basis) in self.bases.iter().enumerate() {
            let off = self.slots.offset(v);
            for (j, row) in basis.iter().enumerate() {
                let k = self.offsets[v] + j;
                for (i, &x) in row.iter().enumerate() {
                    e[(off + i, k)] = x;
                }
            }
        }
        e
    }

    pub fn projection(&self) -> Projection {
        let per_vertex: Vec<HermitianMatrix> = self
            .bases
            .iter()
            .enumerate()
            .map(|(v, basis)| {
                let deg = self.slots.degree(v);
                let p = ComplexMatrix::from_fn(deg, deg, |i, j| basis.iter().map(|b| b[i] * b[j].conj()).sum());
                HermitianMatrix::new(p).expect("square")
            })
            .collect();
        let e = self.embedding();
        let global = HermitianMatrix::new(e.matmul(&e.adjoint())).expect("square");
        Projection { per_vertex, global }
    }

    /// Orthogonal complement 𝒢^⊥ inside each ℂ^{E_v}.
    pub fn dual_space(&self) -> Self {
        let projection = self.projection();
        let bases = projection
            .per_vertex
            .iter()
            .map(|p| {
                let eig = hermitian_eig(&p.combine(-1.0, &HermitianMatrix::identity(p.dim()), 1.0))
                    .expect("projection complement diagonalises");
                (0..eig.dim())
                    .filter(|&k| eig.eigenvalues[k] > 0.5)
                    .map(|k| eig.eigenvector(k))
                    .collect()
            })
            .collect();
        Self::from_bases(self.slots.clone(), bases, Vec::new())
    }

    /// Space of vectors `F` with `s F` in the given space.
    pub fn apply_signs(&self, s: &SignedIdentity) -> Self {
        let bases = self
            .bases
            .iter()
            .enumerate()
            .map(|(v, basis)| {
                let off = self.slots.offset(v);
                basis
                    .iter()
                    .map(|row| row.iter().enumerate().map(|(i, x)| x * s.signs[off + i]).collect())
                    .collect()
            })
            .collect();
        Self::from_bases(self.slots.clone(), bases, Vec::new())
    }

    /// `{F : s F ∈ 𝒢^⊥}`.
    pub fn oriented_dual(&self, s: &SignedIdentity) -> Self {
        self.dual_space().apply_signs(s)
    }
}

/// Hermitian coupling operator `L` on 𝒢, in the global basis.
#[derive(Debug, Clone)]
pub struct Coupling {
    matrix: HermitianMatrix,
    scalar: Option<f64>,
}

impl Coupling {
    pub fn zero(dim: usize) -> Self {
        Self::scalar(0.0, dim)
    }

    pub fn scalar(c: f64, dim: usize) -> Self {
        Self {
            matrix: HermitianMatrix::identity(dim).scaled(c),
            scalar: Some(c),
        }
    }

    /// Dense Hermitian coupling; rejects matrices that are not Hermitian to
    /// `1e-10 (1 + |L|_max)`.
    pub fn dense(m: ComplexMatrix) -> Result<Self, VertexSpaceError> {
        let deviation = m.sub(&m.adjoint()).max_abs();
        if deviation > 1e-10 * (1.0 + m.max_abs()) {
            return Err(VertexSpaceError::CouplingNotHermitian(deviation));
        }
        let matrix = HermitianMatrix::new(m)?;
        let n = matrix.dim();
        let c = if n > 0 { matrix[(0, 0)].re } else { 0.0 };
        let is_scalar = matrix.combine(1.0, &HermitianMatrix::identity(n), -c).max_abs() == 0.0;
        Ok(Self {
            matrix,
            scalar: is_scalar.then_some(c),
        })
    }

    pub fn from_decl(decl: &CouplingDecl, dim: usize) -> Result<Self, VertexSpaceError> {
        match decl {
            CouplingDecl::Zero => Ok(Self::zero(dim)),
            CouplingDecl::Scalar(c) => Ok(Self::scalar(*c, dim)),
            CouplingDecl::Dense(rows) => {
                if rows.len() != dim {
                    return Err(VertexSpaceError::CouplingDimension { got: rows.len(), dim });
                }
                let m = ComplexMatrix::from_rows(rows).map_err(|_| VertexSpaceError::CouplingRagged)?;
                Self::dense(m)
            }
        }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `Some(c)` when `L = c I`.
    pub fn as_scalar(&self) -> Option<f64> {
        self.scalar
    }
}
