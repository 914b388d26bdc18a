//! Host graphs of minimum degree at least `k`.
//!
//! Every host implements [`GraphView`]. Dense families (complete, complete
//! bipartite, clique chains, pseudo-cliques) are implicit: their neighbor sets
//! are a contiguous id span minus the vertex itself and a short sorted list of
//! missing ids, so a graph on `10^6` vertices costs a few words of memory.

mod explicit;
mod implicit;
pub mod io;
mod pseudo;
mod regular;
mod spec;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

pub use explicit::ExplicitGraph;
pub use implicit::{CliqueChain, CompleteBipartite, CompleteGraph};
pub use pseudo::{gen_pseudo_clique, PseudoClique};
pub use regular::gen_random_regular;
pub use spec::{GeneratorFamily, GeneratorSpec, Host};

pub type VertexId = u32;

/// Sentinel for "no vertex" in dense per-vertex arrays.
pub const NONE: VertexId = VertexId::MAX;

/// Canonical unordered edge `{u, v}` with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub u: VertexId,
    pub v: VertexId,
}

impl EdgeKey {
    /// Canonicalizes the pair. Loops are representable here and rejected by
    /// the builders.
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            EdgeKey { u: a, v: b }
        } else {
            EdgeKey { u: b, v: a }
        }
    }

    pub fn packed(self) -> u64 {
        ((self.u as u64) << 32) | self.v as u64
    }

    pub fn from_packed(key: u64) -> Self {
        EdgeKey {
            u: (key >> 32) as u32,
            v: key as u32,
        }
    }

    pub fn other(self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// How the neighbors of one vertex are stored.
#[derive(Clone, Debug)]
pub enum Adjacency<'a> {
    /// Sorted neighbor list.
    List(&'a [VertexId]),
    /// Every id in `span` except `center` and the sorted `missing` ids.
    Span {
        span: Range<VertexId>,
        center: VertexId,
        missing: &'a [VertexId],
    },
}

impl<'a> Adjacency<'a> {
    pub fn contains(&self, w: VertexId) -> bool {
        match self {
            Adjacency::List(list) => list.binary_search(&w).is_ok(),
            Adjacency::Span {
                span,
                center,
                missing,
            } => span.contains(&w) && w != *center && missing.binary_search(&w).is_err(),
        }
    }

    pub fn iter(&self) -> Neighbors<'a> {
        match self {
            Adjacency::List(list) => Neighbors::List(list.iter()),
            Adjacency::Span {
                span,
                center,
                missing,
            } => Neighbors::Span {
                next: span.start,
                end: span.end,
                center: *center,
                missing,
            },
        }
    }
}

/// Ascending iterator over the neighbors of a vertex.
pub enum Neighbors<'a> {
    List(std::slice::Iter<'a, VertexId>),
    Span {
        next: VertexId,
        end: VertexId,
        center: VertexId,
        missing: &'a [VertexId],
    },
}

impl Iterator for Neighbors<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        match self {
            Neighbors::List(it) => it.next().copied(),
            Neighbors::Span {
                next,
                end,
                center,
                missing,
            } => loop {
                if *next >= *end {
                    return None;
                }
                let w = *next;
                *next += 1;
                if w == *center {
                    continue;
                }
                while let Some((&m, rest)) = missing.split_first() {
                    if m < w {
                        *missing = rest;
                    } else {
                        break;
                    }
                }
                if missing.first() == Some(&w) {
                    continue;
                }
                return Some(w);
            },
        }
    }
}

/// Read-only view of a simple undirected host graph.
///
/// Neighbor enumeration is strictly increasing; this fixes the DFS query
/// order.
pub trait GraphView: Send + Sync {
    fn vertex_count(&self) -> usize;

    fn degree(&self, v: VertexId) -> usize;

    fn adjacency(&self, v: VertexId) -> Adjacency<'_>;

    fn neighbors(&self, v: VertexId) -> Neighbors<'_> {
        self.adjacency(v).iter()
    }

    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        (u as usize) < self.vertex_count() && self.adjacency(u).contains(v)
    }

    fn edge_count(&self) -> u64 {
        (0..self.vertex_count() as VertexId)
            .map(|v| self.degree(v) as u64)
            .sum::<u64>()
            / 2
    }

    /// True when every vertex is adjacent to every other vertex except a short
    /// per-vertex `missing` list. Analytics use arithmetic counting on such
    /// hosts instead of neighbor scans.
    fn is_cofinite(&self) -> bool {
        false
    }
}

impl<G: GraphView + ?Sized> GraphView for &G {
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }
    fn degree(&self, v: VertexId) -> usize {
        (**self).degree(v)
    }
    fn adjacency(&self, v: VertexId) -> Adjacency<'_> {
        (**self).adjacency(v)
    }
    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        (**self).has_edge(u, v)
    }
    fn edge_count(&self) -> u64 {
        (**self).edge_count()
    }
    fn is_cofinite(&self) -> bool {
        (**self).is_cofinite()
    }
}

/// Minimum degree; 0 for the empty graph.
pub fn min_degree<G: GraphView + ?Sized>(g: &G) -> usize {
    (0..g.vertex_count() as VertexId)
        .map(|v| g.degree(v))
        .min()
        .unwrap_or(0)
}

/// All edges `u < v` in lexicographic order.
pub fn edges<G: GraphView + ?Sized>(g: &G) -> impl Iterator<Item = EdgeKey> + '_ {
    (0..g.vertex_count() as VertexId).flat_map(move |u| {
        g.neighbors(u)
            .filter(move |&w| w > u)
            .map(move |w| EdgeKey { u, v: w })
    })
}

/// Materializes any view into compressed adjacency arrays.
pub fn to_explicit<G: GraphView + ?Sized>(g: &G) -> ExplicitGraph {
    let n = g.vertex_count();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for v in 0..n as VertexId {
        targets.extend(g.neighbors(v));
        offsets.push(targets.len());
    }
    ExplicitGraph::from_csr_unchecked(offsets, targets)
}

/// Induced subgraph on `vertices` (in the given order), relabeled to
/// `0..vertices.len()`. Returns the graph and the local-to-host id map.
pub fn induced_subgraph<G: GraphView + ?Sized>(
    g: &G,
    vertices: &[VertexId],
) -> (ExplicitGraph, Vec<VertexId>) {
    let n = g.vertex_count();
    let mut local = vec![NONE; n];
    for (i, &v) in vertices.iter().enumerate() {
        local[v as usize] = i as VertexId;
    }
    let mut offsets = Vec::with_capacity(vertices.len() + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for &v in vertices {
        let start = targets.len();
        match g.adjacency(v) {
            Adjacency::Span { .. } if vertices.len() < g.degree(v) => {
                for &w in vertices {
                    if g.has_edge(v, w) {
                        targets.push(local[w as usize]);
                    }
                }
            }
            adj => targets.extend(
                adj.iter()
                    .map(|w| local[w as usize])
                    .filter(|&l| l != NONE),
            ),
        }
        targets[start..].sort_unstable();
        offsets.push(targets.len());
    }
    (
        ExplicitGraph::from_csr_unchecked(offsets, targets),
        vertices.to_vec(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_key_is_canonical() {
        assert_eq!(EdgeKey::new(5, 2), EdgeKey { u: 2, v: 5 });
        let e = EdgeKey::new(7, 3);
        assert_eq!(EdgeKey::from_packed(e.packed()), e);
        assert_eq!(e.other(3), 7);
    }

    #[test]
    fn span_iteration_skips_center_and_missing() {
        let missing = [2, 5];
        let adj = Adjacency::Span {
            span: 0..7,
            center: 3,
            missing: &missing,
        };
        assert_eq!(adj.iter().collect::<Vec<_>>(), vec![0, 1, 4, 6]);
        assert!(adj.contains(4));
        assert!(!adj.contains(3));
        assert!(!adj.contains(5));
        assert!(!adj.contains(7));
    }

    #[test]
    fn min_degree_of_empty_graph_is_zero() {
        let g = ExplicitGraph::from_edges(0, &[]).unwrap();
        assert_eq!(min_degree(&g), 0);
    }

    #[test]
    fn min_degree_examples() {
        assert_eq!(min_degree(&CompleteGraph::new(3).unwrap()), 3);
        let c5: Vec<_> = (0..5).map(|i| EdgeKey::new(i, (i + 1) % 5)).collect();
        assert_eq!(min_degree(&ExplicitGraph::from_edges(5, &c5).unwrap()), 2);
        assert_eq!(min_degree(&CliqueChain::new(2, 2).unwrap()), 2);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = CompleteGraph::new(5).unwrap();
        let (h, map) = induced_subgraph(&g, &[4, 1, 2]);
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(map, vec![4, 1, 2]);
    }
}
