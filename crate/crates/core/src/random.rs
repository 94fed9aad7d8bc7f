//! Seeded generators for test inputs: graphs, vertex spaces, Hermitian matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, GraphDocument, MetricGraph, SpaceDecl};
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianMatrix, C64};

pub type TestRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_complex_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

/// Hermitian matrix with entries of modulus at most about 1.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> HermitianMatrix {
    let m = ComplexMatrix::from_fn(n, n, |_, _| random_complex(rng));
    HermitianMatrix::new(m).expect("square finite matrix")
}

/// Unitary matrix from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    hermitian_eig(&random_hermitian(rng, n))
        .expect("random Hermitian matrices diagonalise")
        .eigenvectors
}

/// Random graph with at most `max_vertices` vertices, possibly with
/// self-loops and multiple edges. Lengths are 1 when `unit` is set and drawn
/// from `[0.25, 1]` otherwise.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, unit: bool) -> MetricGraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut ends: Vec<(usize, usize)> = Vec::new();
    // Spanning tree so that no vertex is isolated.
    for v in 1..n {
        ends.push((rng.gen_range(0..v), v));
    }
    let extra = rng.gen_range(usize::from(n == 1)..=n.max(1));
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = if rng.gen_bool(0.2) { a } else { rng.gen_range(0..n) };
        ends.push((a, b));
    }
    let edges = ends
        .into_iter()
        .enumerate()
        .map(|(id, (a, b))| {
            let (tail, head) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            let length = if unit { 1.0 } else { rng.gen_range(0.25..=1.0) };
            Edge::new(id as u64, tail, head, length)
        })
        .collect();
    MetricGraph::new(n, edges).expect("generated graph is valid")
}

/// Random per-vertex declarations mixing all four kinds.
pub fn random_space_decls<R: Rng>(rng: &mut R, g: &MetricGraph) -> Vec<SpaceDecl> {
    (0..g.vertex_count())
        .map(|v| match rng.gen_range(0..4) {
            0 => SpaceDecl::Standard,
            1 => SpaceDecl::Dirichlet,
            2 => SpaceDecl::Neumann,
            _ => {
                let deg = g.degree(v);
                let dim = rng.gen_range(0..=deg);
                SpaceDecl::Custom((0..dim).map(|_| random_complex_vec(rng, deg)).collect())
            }
        })
        .collect()
}

/// Random unit graph with random vertex spaces and zero coupling.
pub fn random_document<R: Rng>(rng: &mut R, max_vertices: usize, unit: bool) -> GraphDocument {
    let graph = random_graph(rng, max_vertices, unit);
    let spaces = random_space_decls(rng, &graph);
    GraphDocument {
        spaces,
        ..GraphDocument::standard(graph)
    }
}
