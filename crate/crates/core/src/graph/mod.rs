//! Metric graphs: combinatorial structure, edge lengths and endpoint slots.

mod document;
mod slots;

use thiserror::Error;

pub use document::{
    format_complex, parse_complex, parse_graph, serialize_graph, CouplingDecl, GraphDocument, SpaceDecl,
};
pub use slots::{End, SlotIndexing, VertexSlot};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("duplicate edge id {0}")]
    DuplicateEdge(u64),
    #[error("edge {id}: length {length} must be positive and finite")]
    BadLength { id: u64, length: f64 },
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("edge {edge}: endpoint {vertex} out of range for {vertex_count} vertices")]
    DanglingEndpoint {
        edge: u64,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("graph must have at least one vertex")]
    NoVertices,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub id: u64,
    /// Initial vertex.
    pub tail: usize,
    /// Terminal vertex.
    pub head: usize,
    pub length: f64,
}

impl Edge {
    pub fn new(id: u64, tail: usize, head: usize, length: f64) -> Self {
        Self { id, tail, head, length }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn endpoint(&self, end: End) -> usize {
        match end {
            End::Tail => self.tail,
            End::Head => self.head,
        }
    }
}

/// Validated metric graph. Edges are kept sorted by id.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl MetricGraph {
    pub fn new(vertex_count: usize, mut edges: Vec<Edge>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        edges.sort_by_key(|e| e.id);
        for pair in edges.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(GraphError::DuplicateEdge(pair[0].id));
            }
        }
        let mut touched = vec![false; vertex_count];
        for e in &edges {
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(GraphError::BadLength {
                    id: e.id,
                    length: e.length,
                });
            }
            for v in [e.tail, e.head] {
                if v >= vertex_count {
                    return Err(GraphError::DanglingEndpoint {
                        edge: e.id,
                        vertex: v,
                        vertex_count,
                    });
                }
                touched[v] = true;
            }
        }
        if let Some(v) = touched.iter().position(|t| !t) {
            return Err(GraphError::IsolatedVertex(v));
        }
        Ok(Self { vertex_count, edges })
    }

    /// Cycle `0 -> 1 -> ... -> n-1 -> 0` with unit edges.
    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| Edge::new(i as u64, i, (i + 1) % n, 1.0)).collect();
        Self::new(n, edges).expect("cycle graph is valid")
    }

    /// Path `0 - 1 - ... - k` with the given lengths.
    pub fn path(lengths: &[f64]) -> Result<Self, GraphError> {
        let edges = lengths
            .iter()
            .enumerate()
            .map(|(i, &l)| Edge::new(i as u64, i, i + 1, l))
            .collect();
        Self::new(lengths.len() + 1, edges)
    }

    pub fn single_edge(length: f64) -> Result<Self, GraphError> {
        Self::path(&[length])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    /// Position of the edge with the given id.
    pub fn edge_index(&self, id: u64) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    /// Shortest edge length (ℓ₀).
    pub fn min_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min)
    }

    pub fn max_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    /// All edges have unit length (to 1e-12).
    pub fn is_equilateral(&self) -> bool {
        self.edges.iter().all(|e| (e.length - 1.0).abs() <= 1e-12)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.tail == v) + usize::from(e.head == v))
            .sum()
    }

    pub fn slots(&self) -> SlotIndexing {
        SlotIndexing::new(self)
    }

    /// The other end of the edge carrying `slot`.
    pub fn opposite_slot(&self, slot: VertexSlot) -> VertexSlot {
        let end = slot.end.opposite();
        VertexSlot {
            vertex: self.edges[slot.edge].endpoint(end),
            edge: slot.edge,
            end,
        }
    }

    /// Copy with the orientation of edge `index` reversed.
    pub fn with_flipped_edge(&self, index: usize) -> Self {
        let mut g = self.clone();
        let e = &mut g.edges[index];
        std::mem::swap(&mut e.tail, &mut e.head);
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_errors() {
        assert_eq!(
            MetricGraph::new(3, vec![Edge::new(0, 0, 5, 1.0)]),
            Err(GraphError::DanglingEndpoint {
                edge: 0,
                vertex: 5,
                vertex_count: 3
            })
        );
        assert_eq!(
            MetricGraph::new(2, vec![Edge::new(0, 0, 1, 1.0), Edge::new(0, 1, 0, 1.0)]),
            Err(GraphError::DuplicateEdge(0))
        );
        assert_eq!(
            MetricGraph::new(3, vec![Edge::new(0, 0, 1, 1.0)]),
            Err(GraphError::IsolatedVertex(2))
        );
        assert!(matches!(
            MetricGraph::new(2, vec![Edge::new(0, 0, 1, 0.0)]),
            Err(GraphError::BadLength { .. })
        ));
        assert!(matches!(
            MetricGraph::new(2, vec![Edge::new(0, 0, 1, f64::NAN)]),
            Err(GraphError::BadLength { .. })
        ));
    }

    #[test]
    fn edges_sorted_by_id() {
        let g = MetricGraph::new(2, vec![Edge::new(7, 0, 1, 1.0), Edge::new(2, 1, 0, 0.5)]).unwrap();
        assert_eq!(g.edge(0).id, 2);
        assert_eq!(g.edge_index(7), Some(1));
        assert_eq!(g.min_length(), 0.5);
        assert!(!g.is_equilateral());
    }

    #[test]
    fn opposite_is_involutive() {
        let g = MetricGraph::cycle(3);
        let slots = g.slots();
        for &s in slots.slots() {
            let o = g.opposite_slot(s);
            assert_eq!(o.edge, s.edge);
            assert_ne!(o.end, s.end);
            assert_eq!(g.opposite_slot(o), s);
        }
        let single = MetricGraph::single_edge(1.0).unwrap();
        let s = single.slots().slots()[1];
        assert_eq!((s.edge, s.end), (0, End::Head));
        assert_eq!(single.opposite_slot(s).end, End::Tail);

        let lp = MetricGraph::new(1, vec![Edge::new(0, 0, 0, 1.0)]).unwrap();
        let s = lp.slots().slots()[0];
        assert_eq!(lp.opposite_slot(s), VertexSlot { vertex: 0, edge: 0, end: End::Head });
    }
}
