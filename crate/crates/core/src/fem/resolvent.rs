use num_complex::Complex64;

use super::system::FemSystem;
use super::FemError;
use crate::graph::{MetricGraph, SpaceDecl};
use crate::krein::EigenfunctionSample;
use crate::linalg::LuFactorization;
use crate::vertex_space::{Coupling, VertexSpace};

/// Three-point Gauss rule on [0, 1].
const GAUSS: [(f64, f64); 3] = [
    (0.112_701_665_379_258_3, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

/// Linear interpolation of equispaced samples of one edge at `x ∈ [0, ℓ]`.
fn interpolate(samples: &[Complex64], length: f64, x: f64) -> Complex64 {
    let n = samples.len() - 1;
    if n == 0 {
        return samples[0];
    }
    let t = (x / length * n as f64).clamp(0.0, n as f64);
    let j = (t.floor() as usize).min(n - 1);
    let w = t - j as f64;
    samples[j] * (1.0 - w) + samples[j + 1] * w
}

/// Nodal values of edge `e` (endpoints included) for the coefficient vector `x`.
fn edge_nodes(sys: &FemSystem, e: usize, x: &[Complex64]) -> Vec<Complex64> {
    let ne = sys.cells()[e];
    let base = sys.interior_offset(e);
    let nv = sys.vertex_dim();
    let dot = |row: &[Complex64]| (0..nv).map(|k| row[k] * x[k]).sum::<Complex64>();
    let mut nodes = Vec::with_capacity(ne + 1);
    nodes.push(dot(sys.tail_row(e)));
    nodes.extend_from_slice(&x[base..base + ne - 1]);
    nodes.push(dot(sys.head_row(e)));
    nodes
}

/// Load vector `b_i = ⟨φ_i, g⟩` for `g` given by equispaced samples per
/// edge, with Gauss quadrature on every cell.
pub fn load_vector(sys: &FemSystem, rhs: &[Vec<Complex64>]) -> Result<Vec<Complex64>, FemError> {
    if rhs.len() != sys.cells().len() || rhs.iter().any(|r| r.is_empty()) {
        return Err(FemError::RhsShape {
            edges: sys.cells().len(),
            found: rhs.len(),
        });
    }
    let nv = sys.vertex_dim();
    let mut b = vec![Complex64::new(0.0, 0.0); sys.dim()];
    for e in 0..sys.cells().len() {
        let ne = sys.cells()[e];
        let len = sys.lengths()[e];
        let he = len / ne as f64;
        let base = sys.interior_offset(e);
        // local[j] = ∫ g φ_j over the cells touching node j
        let mut local = vec![Complex64::new(0.0, 0.0); ne + 1];
        for cell in 0..ne {
            for &(s, w) in &GAUSS {
                let g = interpolate(&rhs[e], len, (cell as f64 + s) * he) * (w * he);
                local[cell] += g * (1.0 - s);
                local[cell + 1] += g * s;
            }
        }
        for j in 1..ne {
            b[base + j - 1] += local[j];
        }
        let (t, h) = (sys.tail_row(e), sys.head_row(e));
        for k in 0..nv {
            b[k] += t[k].conj() * local[0] + h[k].conj() * local[ne];
        }
    }
    Ok(b)
}

/// Samples the discrete function `x` at `samples + 1` equispaced points per
/// edge; derivatives are the cell slopes.
pub fn sample_solution(sys: &FemSystem, x: &[Complex64], samples: usize) -> EigenfunctionSample {
    let mut values = Vec::new();
    let mut derivatives = Vec::new();
    let mut trace = vec![Complex64::new(0.0, 0.0); sys.slot_count()];
    let mut oriented = vec![Complex64::new(0.0, 0.0); sys.slot_count()];
    for e in 0..sys.cells().len() {
        let ne = sys.cells()[e];
        let len = sys.lengths()[e];
        let he = len / ne as f64;
        let nodes = edge_nodes(sys, e, x);
        let slope = |cell: usize| (nodes[cell + 1] - nodes[cell]) / he;
        let mut vals = Vec::with_capacity(samples + 1);
        let mut ders = Vec::with_capacity(samples + 1);
        for j in 0..=samples {
            let pos = len * j as f64 / samples as f64;
            vals.push(interpolate(&nodes, len, pos));
            let cell = ((pos / he).floor() as usize).min(ne - 1);
            ders.push(slope(cell));
        }
        let (t, h) = sys.slot_pairs()[e];
        trace[t] = nodes[0];
        trace[h] = nodes[ne];
        oriented[t] = -slope(0);
        oriented[h] = slope(ne - 1);
        values.push(vals);
        derivatives.push(ders);
    }
    EigenfunctionSample {
        lengths: sys.lengths().to_vec(),
        values,
        derivatives,
        trace,
        oriented_derivative: oriented,
    }
}

/// `(Δ − z)^{-1} g` for the discretised operator: solves `(K − z M) x = b`
/// with the Gauss load vector of `g` and samples the result.
pub fn fem_resolvent_apply(
    sys: &FemSystem,
    z: Complex64,
    rhs: &[Vec<Complex64>],
    samples: usize,
) -> Result<EigenfunctionSample, FemError> {
    let b = load_vector(sys, rhs)?;
    let a = sys.dense_pencil(Complex64::new(1.0, 0.0), -z);
    let lu = LuFactorization::new(&a).map_err(|source| FemError::SingularResolvent { z, source })?;
    Ok(sample_solution(sys, &lu.solve(&b), samples.max(1)))
}

/// Resolvent of the decoupled Dirichlet Laplacian on the same edges.
pub fn fem_dirichlet_resolvent_apply(
    g: &MetricGraph,
    h: f64,
    z: Complex64,
    rhs: &[Vec<Complex64>],
    samples: usize,
) -> Result<EigenfunctionSample, FemError> {
    let vs = VertexSpace::build(g, &vec![SpaceDecl::Dirichlet; g.vertex_count()])?;
    let sys = FemSystem::assemble(g, &vs, &Coupling::zero(0), h)?;
    fem_resolvent_apply(&sys, z, rhs, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn dirichlet_interval_with_constant_load() {
        let g = MetricGraph::single_edge(1.0).unwrap();
        let rhs = vec![vec![c(1.0); 11]];
        let u = fem_dirichlet_resolvent_apply(&g, 1.0 / 128.0, c(-1.0), &rhs, 2).unwrap();
        let mid = u.values[0][1].re;
        let exact = 1.0 - 1.0 / (0.5f64).cosh();
        assert!((exact - 0.1131811).abs() < 1e-7);
        assert!((mid - exact).abs() < 1e-6, "{mid} vs {exact}");
        assert!((mid - 0.113188).abs() < 1e-5);
        assert!(u.values[0][0].norm() < 1e-15 && u.values[0][2].norm() < 1e-15);
    }

    #[test]
    fn resolvent_on_an_eigenfunction() {
        // Neumann interval, cos(πx) has eigenvalue π²
        let g = MetricGraph::single_edge(1.0).unwrap();
        let vs = VertexSpace::standard(&g);
        let sys = FemSystem::assemble(&g, &vs, &Coupling::zero(2), 1.0 / 128.0).unwrap();
        let n = 400;
        let rhs = vec![(0..=n).map(|j| c((PI * j as f64 / n as f64).cos())).collect::<Vec<_>>()];
        let u = fem_resolvent_apply(&sys, c(-1.0), &rhs, n).unwrap();
        let scale = 1.0 / (PI * PI + 1.0);
        for (got, want) in u.values[0].iter().zip(&rhs[0]) {
            assert!((got - want * scale).norm() < 1e-4);
        }
        // vertex condition: derivative trace ≈ 0 at both ends
        assert!(u.oriented_derivative.iter().all(|d| d.norm() < 0.01));
    }

    #[test]
    fn complex_shift_is_solvable() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        let sys = FemSystem::assemble(&g, &vs, &Coupling::zero(3), 1.0 / 32.0).unwrap();
        let rhs = vec![vec![c(1.0); 5]; 3];
        let u = fem_resolvent_apply(&sys, Complex64::new(2.0, 1.0), &rhs, 8).unwrap();
        // constants are eigenfunctions with eigenvalue 0
        let want = c(1.0) / (c(0.0) - Complex64::new(2.0, 1.0));
        for v in u.values.iter().flatten() {
            assert!((v - want).norm() < 1e-10);
        }
        assert!(u.trace_consistency(&vs) < 1e-15);
    }
}
