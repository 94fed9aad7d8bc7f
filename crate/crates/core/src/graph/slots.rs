use super::MetricGraph;

/// Which end of an edge a slot sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    /// Initial vertex, sign −1.
    Tail,
    /// Terminal vertex, sign +1.
    Head,
}

impl End {
    pub fn opposite(self) -> Self {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }

    /// Orientation sign: −1 at the tail, +1 at the head.
    pub fn sign(self) -> f64 {
        match self {
            End::Tail => -1.0,
            End::Head => 1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            End::Tail => '-',
            End::Head => '+',
        }
    }
}

/// One edge end attached to a vertex. `edge` is the position of the edge in
/// [`MetricGraph::edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexSlot {
    pub vertex: usize,
    pub edge: usize,
    pub end: End,
}

/// Canonical enumeration of all edge ends.
///
/// Slots are grouped by vertex (vertex-major); within a vertex they are
/// ordered by edge, with the tail end of a self-loop before its head end.
/// The global index of a slot is its position in [`SlotIndexing::slots`].
#[derive(Debug, Clone, PartialEq)]
pub struct SlotIndexing {
    slots: Vec<VertexSlot>,
    offsets: Vec<usize>,
    by_edge: Vec<[usize; 2]>,
}

impl SlotIndexing {
    pub fn new(g: &MetricGraph) -> Self {
        let n = g.vertex_count();
        let mut per_vertex: Vec<Vec<VertexSlot>> = vec![Vec::new(); n];
        for (k, e) in g.edges().iter().enumerate() {
            // Edges are visited in id order, tail before head.
            per_vertex[e.tail].push(VertexSlot {
                vertex: e.tail,
                edge: k,
                end: End::Tail,
            });
            per_vertex[e.head].push(VertexSlot {
                vertex: e.head,
                edge: k,
                end: End::Head,
            });
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut slots = Vec::with_capacity(2 * g.edge_count());
        for list in per_vertex {
            offsets.push(slots.len());
            slots.extend(list);
        }
        offsets.push(slots.len());
        let mut by_edge = vec![[0usize; 2]; g.edge_count()];
        for (i, s) in slots.iter().enumerate() {
            by_edge[s.edge][end_index(s.end)] = i;
        }
        Self {
            slots,
            offsets,
            by_edge,
        }
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn slots(&self) -> &[VertexSlot] {
        &self.slots
    }

    pub fn slot(&self, index: usize) -> VertexSlot {
        self.slots[index]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Global index of the first slot at `v`.
    pub fn offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    pub fn vertex_slots(&self, v: usize) -> &[VertexSlot] {
        &self.slots[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Global index of the slot of `edge` at `end`.
    pub fn index_of(&self, edge: usize, end: End) -> usize {
        self.by_edge[edge][end_index(end)]
    }

    /// Position of the slot within its vertex block.
    pub fn local_index(&self, global: usize) -> usize {
        global - self.offsets[self.slots[global].vertex]
    }
}

fn end_index(end: End) -> usize {
    match end {
        End::Tail => 0,
        End::Head => 1,
    }
}
