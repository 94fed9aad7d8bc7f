use num_complex::Complex64;

use super::FemError;
use crate::graph::{End, MetricGraph};
use crate::linalg::{cholesky, hermitian_eig, ComplexMatrix, HermitianMatrix, Tridiagonal};
use crate::vertex_space::{Coupling, VertexSpace};

/// Conforming piecewise-linear discretisation of the metric Laplacian with
/// vertex conditions `(𝒢, L)`.
///
/// Degrees of freedom are ordered as the `dim 𝒢` vertex functions first,
/// then the interior nodes of each edge in edge order. The vertex function
/// for basis vector `b_k` takes the value `b_k(slot)` at each edge endpoint
/// and falls linearly to zero at the neighbouring interior node, so every
/// discrete function has `f̄ ∈ 𝒢`.
#[derive(Debug, Clone)]
pub struct FemSystem {
    h: f64,
    lengths: Vec<f64>,
    /// Subintervals per edge.
    cells: Vec<usize>,
    /// Per edge: vertex-basis values at the tail and head slots.
    tail_rows: Vec<Vec<Complex64>>,
    head_rows: Vec<Vec<Complex64>>,
    /// Slot index of each edge's tail and head.
    slot_pairs: Vec<(usize, usize)>,
    slot_count: usize,
    coupling: HermitianMatrix,
}

impl FemSystem {
    /// Mesh with `⌈ℓ_e / h⌉` equal cells on each edge; needs `h ≤ ℓ₀ / 4`.
    pub fn assemble(g: &MetricGraph, vs: &VertexSpace, l: &Coupling, h: f64) -> Result<Self, FemError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(FemError::InvalidMesh(h));
        }
        let limit = g.min_length() / 4.0;
        if h > limit * (1.0 + 1e-12) {
            return Err(FemError::MeshTooCoarse { h, limit });
        }
        if l.dim() != vs.dim() {
            return Err(FemError::CouplingDimension {
                expected: vs.dim(),
                found: l.dim(),
            });
        }
        let emb = vs.embedding();
        let slots = vs.slots();
        let mut tail_rows = Vec::new();
        let mut head_rows = Vec::new();
        let mut slot_pairs = Vec::new();
        for e in 0..g.edge_count() {
            let t = slots.index_of(e, End::Tail);
            let hd = slots.index_of(e, End::Head);
            tail_rows.push(emb.row(t).to_vec());
            head_rows.push(emb.row(hd).to_vec());
            slot_pairs.push((t, hd));
        }
        let lengths: Vec<f64> = g.edges().iter().map(|e| e.length).collect();
        let cells = lengths.iter().map(|&len| ((len / h) * (1.0 - 1e-12)).ceil() as usize).collect();
        Ok(Self {
            h,
            lengths,
            cells,
            tail_rows,
            head_rows,
            slot_pairs,
            slot_count: slots.slot_count(),
            coupling: l.matrix().clone(),
        })
    }

    /// The same system with every cell split in two.
    pub fn refined(&self) -> Self {
        let mut out = self.clone();
        out.h /= 2.0;
        out.cells = self.cells.iter().map(|n| 2 * n).collect();
        out
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn vertex_dim(&self) -> usize {
        self.coupling.dim()
    }

    /// `Σ_e (n_e − 1) + dim 𝒢`.
    pub fn dim(&self) -> usize {
        self.vertex_dim() + self.cells.iter().map(|n| n - 1).sum::<usize>()
    }

    pub(crate) fn slot_pairs(&self) -> &[(usize, usize)] {
        &self.slot_pairs
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.slot_count
    }

    pub(crate) fn tail_row(&self, e: usize) -> &[Complex64] {
        &self.tail_rows[e]
    }

    pub(crate) fn head_row(&self, e: usize) -> &[Complex64] {
        &self.head_rows[e]
    }

    /// Offset of the first interior node of edge `e`.
    pub(crate) fn interior_offset(&self, e: usize) -> usize {
        self.vertex_dim() + self.cells[..e].iter().map(|n| n - 1).sum::<usize>()
    }

    /// Dense `K − σ M` for complex `σ`, entries added as
    /// `k_el (1/h_e) + m_el (h_e/6)` per cell.
    pub(crate) fn dense_pencil(&self, kscale: Complex64, mscale: Complex64) -> ComplexMatrix {
        let n = self.dim();
        let nv = self.vertex_dim();
        let mut a = ComplexMatrix::zeros(n, n);
        for e in 0..self.cells.len() {
            let ne = self.cells[e];
            let he = self.lengths[e] / ne as f64;
            let diag = kscale / he + mscale * (2.0 * he / 6.0);
            let off = -kscale / he + mscale * (he / 6.0);
            let base = self.interior_offset(e);
            // interior chain
            for j in 0..ne - 1 {
                a[(base + j, base + j)] += diag * 2.0;
                if j + 1 < ne - 1 {
                    a[(base + j, base + j + 1)] += off;
                    a[(base + j + 1, base + j)] += off;
                }
            }
            // endpoint cells couple the vertex functions to the first and
            // last interior node
            let t = &self.tail_rows[e];
            let hd = &self.head_rows[e];
            let first = base;
            let last = base + ne - 2;
            for k in 0..nv {
                for l in 0..nv {
                    a[(k, l)] += diag * (t[k].conj() * t[l] + hd[k].conj() * hd[l]);
                }
                a[(k, first)] += off * t[k].conj();
                a[(first, k)] += off * t[k];
                a[(k, last)] += off * hd[k].conj();
                a[(last, k)] += off * hd[k];
            }
        }
        for k in 0..nv {
            for l in 0..nv {
                a[(k, l)] -= self.coupling[(k, l)] * kscale;
            }
        }
        a
    }

    /// Stiffness matrix with the vertex correction `− L`.
    pub fn stiffness(&self) -> HermitianMatrix {
        HermitianMatrix::new(self.dense_pencil(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))).expect("square")
    }

    pub fn mass(&self) -> HermitianMatrix {
        HermitianMatrix::new(self.dense_pencil(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))).expect("square")
    }

    /// Number of discrete eigenvalues strictly below `sigma`, from the
    /// inertia of `K − σ M`.
    ///
    /// The interior chain of each edge is eliminated first (a Sturm
    /// recurrence); the remaining Schur complement on the vertex functions
    /// is dense of size `dim 𝒢` and its inertia comes from a tridiagonal
    /// Sturm count.
    pub fn count_below(&self, sigma: f64) -> usize {
        let nv = self.vertex_dim();
        let mut schur = vec![Complex64::new(0.0, 0.0); nv * nv];
        let mut negatives = 0;
        for e in 0..self.cells.len() {
            let ne = self.cells[e];
            let he = self.lengths[e] / ne as f64;
            let diag = 1.0 / he - sigma * he / 3.0;
            let a = 2.0 * diag;
            let b = -1.0 / he - sigma * he / 6.0;
            let n = ne - 1;
            let tiny = f64::EPSILON * (a.abs() + 2.0 * b.abs()).max(f64::MIN_POSITIVE);
            let fix = |d: f64| if d == 0.0 { -tiny } else { d };

            // forward pivots, with the running product for (T^{-1})_{1n}
            let mut d = fix(a);
            let mut corner = 1.0;
            for _ in 1..n {
                if d < 0.0 {
                    negatives += 1;
                }
                corner *= -b / d;
                d = fix(a - b * b / d);
            }
            if d < 0.0 {
                negatives += 1;
            }
            // the chain is persymmetric, so (T^{-1})_{11} = (T^{-1})_{nn}
            let inv_nn = 1.0 / d;
            let inv_11 = inv_nn;
            let inv_1n = corner / d;

            let t = &self.tail_rows[e];
            let hd = &self.head_rows[e];
            for k in 0..nv {
                let (tk, hk) = (t[k].conj(), hd[k].conj());
                if tk == Complex64::new(0.0, 0.0) && hk == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for l in 0..nv {
                    let direct = diag * (tk * t[l] + hk * hd[l]);
                    let eliminated =
                        (tk * t[l] * inv_11 + (tk * hd[l] + hk * t[l]) * inv_1n + hk * hd[l] * inv_nn) * (b * b);
                    schur[k * nv + l] += direct - eliminated;
                }
            }
        }
        let schur = ComplexMatrix::from_fn(nv, nv, |k, l| schur[k * nv + l] - self.coupling[(k, l)]);
        let schur = HermitianMatrix::new(schur).expect("square");
        negatives + Tridiagonal::from_hermitian(&schur).count_below(0.0)
    }

    /// The `k`-th smallest discrete eigenvalue (0-based), by bisection on
    /// [`count_below`](Self::count_below).
    pub fn eigenvalue(&self, k: usize) -> Result<f64, FemError> {
        if k >= self.dim() {
            return Err(FemError::CountTooLarge {
                count: k + 1,
                limit: self.dim(),
            });
        }
        let mut lo = -1.0;
        let mut steps = 0;
        while self.count_below(lo) > k {
            lo *= 2.0;
            steps += 1;
            if steps > 200 {
                return Err(FemError::NoBracket(k));
            }
        }
        let mut hi: f64 = 1.0;
        steps = 0;
        while self.count_below(hi) <= k {
            hi *= 2.0;
            steps += 1;
            if steps > 200 {
                return Err(FemError::NoBracket(k));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1e-300) || mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `count` smallest eigenvalues, ascending.
    pub fn lowest_eigenvalues(&self, count: usize) -> Result<Vec<f64>, FemError> {
        (0..count).map(|k| self.eigenvalue(k)).collect()
    }

    /// All eigenvalues reduced through the Cholesky factor of the mass
    /// matrix, `R^{-*} K R^{-1}`, and a dense Hermitian eigensolver. Meant
    /// for cross-checks on coarse meshes.
    pub fn dense_eigenvalues(&self) -> Result<Vec<f64>, FemError> {
        let r = cholesky(&self.mass())?;
        let reduced = r.reduce(&self.stiffness())?;
        Ok(hermitian_eig(&reduced)?.eigenvalues)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SpaceDecl;
    use crate::linalg::inertia;
    use crate::random::{random_document, random_hermitian, seeded_rng};
    use std::f64::consts::PI;

    fn edge(decls: &[SpaceDecl]) -> (MetricGraph, VertexSpace) {
        let g = MetricGraph::single_edge(1.0).unwrap();
        let vs = VertexSpace::build(&g, decls).unwrap();
        (g, vs)
    }

    #[test]
    fn dimension_formula_and_mesh_limit() {
        let g = MetricGraph::path(&[1.0, 0.5]).unwrap();
        let vs = VertexSpace::standard(&g);
        let sys = FemSystem::assemble(&g, &vs, &Coupling::zero(3), 1.0 / 8.0).unwrap();
        assert_eq!(sys.cells(), &[8, 4]);
        assert_eq!(sys.dim(), 7 + 3 + 3);
        assert_eq!(sys.stiffness().dim(), sys.dim());
        assert!(matches!(
            FemSystem::assemble(&g, &vs, &Coupling::zero(3), 0.2),
            Err(FemError::MeshTooCoarse { .. })
        ));
        assert_eq!(sys.refined().cells(), &[16, 8]);
    }

    #[test]
    fn mass_is_positive_definite_and_constants_are_harmonic() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        let sys = FemSystem::assemble(&g, &vs, &Coupling::zero(3), 0.125).unwrap();
        let i = inertia(&sys.mass());
        assert_eq!(i.positive, sys.dim());
        // the constant function: vertex coordinates 1/√deg · √deg = 1
        let mut x = vec![Complex64::new(0.0, 0.0); sys.dim()];
        for k in 0..3 {
            x[k] = Complex64::new(2f64.sqrt(), 0.0);
        }
        for k in 3..sys.dim() {
            x[k] = Complex64::new(1.0, 0.0);
        }
        let kx = sys.stiffness().matrix().mul_vec(&x);
        assert!(kx.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn dirichlet_and_neumann_intervals() {
        let (g, vs) = edge(&[SpaceDecl::Dirichlet, SpaceDecl::Dirichlet]);
        let sys = FemSystem::assemble(&g, &vs, &Coupling::zero(0), 1.0 / 64.0).unwrap();
        let l0 = sys.eigenvalue(0).unwrap();
        // P1 with consistent mass: λ_h = (6/h²)(1 − cos θ)/(2 + cos θ), θ = πh
        let h = 1.0 / 64.0;
        let theta = PI * h;
        let exact_discrete = 6.0 / (h * h) * (1.0 - theta.cos()) / (2.0 + theta.cos());
        assert!((l0 - exact_discrete).abs() < 1e-10 * exact_discrete);
        assert!(l0 > PI * PI && l0 - PI * PI < 1e-2);

        let (g, vs) = edge(&[SpaceDecl::Standard, SpaceDecl::Standard]);
        let sys = FemSystem::assemble(&g, &vs, &Coupling::zero(2), 1.0 / 64.0).unwrap();
        let low = sys.lowest_eigenvalues(3).unwrap();
        assert!(low[0].abs() < 1e-10);
        // π² is also an eigenvalue of each interior chain, so the eliminated
        // blocks are nearly singular there and the count loses some digits.
        assert!((low[1] - exact_discrete).abs() < 1e-7 * exact_discrete, "{low:?} {exact_discrete}");
        assert!((low[2] - 4.0 * PI * PI).abs() < 0.05);
    }

    #[test]
    fn inertia_count_matches_dense_reduction() {
        let mut rng = seeded_rng(8);
        for _ in 0..8 {
            let doc = random_document(&mut rng, 4, false);
            let vs = VertexSpace::build(&doc.graph, &doc.spaces).unwrap();
            let l = Coupling::dense(random_hermitian(&mut rng, vs.dim()).scaled(2.0).into_matrix()).unwrap();
            let h = doc.graph.min_length() / 4.0;
            let sys = FemSystem::assemble(&doc.graph, &vs, &l, h).unwrap();
            let dense = sys.dense_eigenvalues().unwrap();
            let count = dense.len().min(12);
            let fast = sys.lowest_eigenvalues(count).unwrap();
            for (a, b) in fast.iter().zip(&dense) {
                assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
            }
            for &sigma in &[-3.0, 0.5, 7.0, 40.0] {
                let want = dense.iter().filter(|&&x| x < sigma).count();
                assert_eq!(sys.count_below(sigma), want);
            }
        }
    }

    #[test]
    fn refinement_lowers_eigenvalues() {
        let g = MetricGraph::path(&[1.0, 0.7]).unwrap();
        let vs = VertexSpace::standard(&g);
        let coarse = FemSystem::assemble(&g, &vs, &Coupling::scalar(0.3, 3), 1.0 / 16.0).unwrap();
        let fine = coarse.refined();
        let a = coarse.lowest_eigenvalues(6).unwrap();
        let b = fine.lowest_eigenvalues(6).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(y <= &(x + 1e-12 * (1.0 + x.abs())));
        }
    }
}
