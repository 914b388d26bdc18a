use std::collections::HashSet;

use super::{Adjacency, EdgeKey, GraphView, VertexId};
use crate::error::{Error, Result};

/// Compressed adjacency arrays: `targets[offsets[v]..offsets[v + 1]]` is the
/// sorted neighbor list of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGraph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl ExplicitGraph {
    /// Builds a simple graph from an edge list, rejecting loops, duplicates
    /// and out-of-range endpoints with the offending key.
    pub fn from_edges(n: usize, edges: &[EdgeKey]) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut degree = vec![0usize; n];
        for &raw in edges {
            if raw.u == raw.v {
                return Err(Error::Loop(raw.u));
            }
            let e = EdgeKey::new(raw.u, raw.v);
            if e.v as usize >= n {
                return Err(Error::EndpointOutOfRange { edge: e, n });
            }
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e));
            }
            degree[e.u as usize] += 1;
            degree[e.v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        for &raw in edges {
            let (u, v) = (raw.u as usize, raw.v as usize);
            targets[fill[u]] = raw.v;
            fill[u] += 1;
            targets[fill[v]] = raw.u;
            fill[v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok(ExplicitGraph { offsets, targets })
    }

    /// Caller guarantees sorted, symmetric, loop-free rows.
    pub(crate) fn from_csr_unchecked(offsets: Vec<usize>, targets: Vec<VertexId>) -> Self {
        debug_assert!(offsets.windows(2).all(|w| w[0] <= w[1]));
        ExplicitGraph { offsets, targets }
    }

    pub fn empty(n: usize) -> Self {
        ExplicitGraph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    pub fn neighbor_slice(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn edge_list(&self) -> Vec<EdgeKey> {
        super::edges(self).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }
}

impl GraphView for ExplicitGraph {
    fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    fn adjacency(&self, v: VertexId) -> Adjacency<'_> {
        Adjacency::List(self.neighbor_slice(v))
    }

    fn edge_count(&self) -> u64 {
        self.targets.len() as u64 / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::min_degree;

    fn keys(pairs: &[(u32, u32)]) -> Vec<EdgeKey> {
        pairs.iter().map(|&(u, v)| EdgeKey { u, v }).collect()
    }

    #[test]
    fn triangle() {
        let g = ExplicitGraph::from_edges(3, &keys(&[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert!((0..3).all(|v| g.degree(v) == 2));
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn isolated_vertices() {
        let g = ExplicitGraph::from_edges(4, &[]).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(min_degree(&g), 0);
    }

    #[test]
    fn five_cycle_neighbors_sorted() {
        let c5: Vec<_> = (0..5).map(|i| EdgeKey::new(i, (i + 1) % 5)).collect();
        let g = ExplicitGraph::from_edges(5, &c5).unwrap();
        assert!((0..5).all(|v| g.degree(v) == 2));
        assert_eq!(g.neighbor_slice(0), &[1, 4]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            ExplicitGraph::from_edges(3, &keys(&[(0, 1), (1, 0)])),
            Err(Error::DuplicateEdge(EdgeKey { u: 0, v: 1 }))
        );
        assert_eq!(
            ExplicitGraph::from_edges(3, &keys(&[(2, 2)])),
            Err(Error::Loop(2))
        );
        assert!(matches!(
            ExplicitGraph::from_edges(3, &keys(&[(0, 3)])),
            Err(Error::EndpointOutOfRange { .. })
        ));
    }
}
