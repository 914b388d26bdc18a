use super::{Adjacency, GraphView, VertexId};
use crate::error::{Error, Result};

fn require_k(k: usize, min: usize) -> Result<()> {
    if k < min {
        return Err(Error::InvalidParameter(format!("k = {k} must be at least {min}")));
    }
    if k >= (VertexId::MAX / 4) as usize {
        return Err(Error::InvalidParameter(format!("k = {k} too large")));
    }
    Ok(())
}

/// `K_{k+1}`, stored as its order only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompleteGraph {
    n: VertexId,
}

impl CompleteGraph {
    /// The complete graph of minimum degree `k`.
    pub fn new(k: usize) -> Result<Self> {
        require_k(k, 1)?;
        Ok(CompleteGraph {
            n: k as VertexId + 1,
        })
    }
}

impl GraphView for CompleteGraph {
    fn vertex_count(&self) -> usize {
        self.n as usize
    }
    fn degree(&self, _v: VertexId) -> usize {
        self.n as usize - 1
    }
    fn adjacency(&self, v: VertexId) -> Adjacency<'_> {
        Adjacency::Span {
            span: 0..self.n,
            center: v,
            missing: &[],
        }
    }
    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u != v && u < self.n && v < self.n
    }
    fn edge_count(&self) -> u64 {
        let n = self.n as u64;
        n * (n - 1) / 2
    }
    fn is_cofinite(&self) -> bool {
        true
    }
}

/// `K_{k,k}` with left side `0..k` and right side `k..2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompleteBipartite {
    k: VertexId,
}

impl CompleteBipartite {
    pub fn new(k: usize) -> Result<Self> {
        require_k(k, 1)?;
        Ok(CompleteBipartite { k: k as VertexId })
    }

    pub fn is_left(&self, v: VertexId) -> bool {
        v < self.k
    }
}

impl GraphView for CompleteBipartite {
    fn vertex_count(&self) -> usize {
        2 * self.k as usize
    }
    fn degree(&self, _v: VertexId) -> usize {
        self.k as usize
    }
    fn adjacency(&self, v: VertexId) -> Adjacency<'_> {
        let span = if v < self.k {
            self.k..2 * self.k
        } else {
            0..self.k
        };
        Adjacency::Span {
            span,
            center: v,
            missing: &[],
        }
    }
    fn edge_count(&self) -> u64 {
        (self.k as u64).pow(2)
    }
}

/// `m` copies of `K_{k+1}` in a row, consecutive copies sharing one vertex.
/// Copy `i` occupies ids `i*k ..= i*k + k`, so `n = m*k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliqueChain {
    k: VertexId,
    m: VertexId,
}

impl CliqueChain {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        require_k(k, 2)?;
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if (m as u64) * (k as u64) + 1 >= VertexId::MAX as u64 {
            return Err(Error::InvalidParameter("clique chain too large".into()));
        }
        Ok(CliqueChain {
            k: k as VertexId,
            m: m as VertexId,
        })
    }

    fn span(&self, x: VertexId) -> (VertexId, VertexId) {
        let k = self.k;
        let last = self.m * k;
        if x.is_multiple_of(k) {
            let j = x / k;
            let lo = if j == 0 { 0 } else { x - k };
            let hi = if x == last { last } else { x + k };
            (lo, hi)
        } else {
            let lo = (x / k) * k;
            (lo, lo + k)
        }
    }
}

impl GraphView for CliqueChain {
    fn vertex_count(&self) -> usize {
        (self.m * self.k) as usize + 1
    }
    fn degree(&self, v: VertexId) -> usize {
        let (lo, hi) = self.span(v);
        (hi - lo) as usize
    }
    fn adjacency(&self, v: VertexId) -> Adjacency<'_> {
        let (lo, hi) = self.span(v);
        Adjacency::Span {
            span: lo..hi + 1,
            center: v,
            missing: &[],
        }
    }
    fn edge_count(&self) -> u64 {
        let k = self.k as u64;
        self.m as u64 * k * (k + 1) / 2
    }
}

#[cfg(test)]
mod tests {
    use std::collections::VecDeque;

    use super::*;
    use crate::graph::{min_degree, to_explicit};

    fn eccentricity<G: GraphView>(g: &G, s: VertexId) -> usize {
        let mut dist = vec![usize::MAX; g.vertex_count()];
        dist[s as usize] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in g.neighbors(v) {
                if dist[w as usize] == usize::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist.into_iter().max().unwrap()
    }

    #[test]
    fn complete_small() {
        let g = CompleteGraph::new(3).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.neighbors(2).collect::<Vec<_>>(), vec![0, 1, 3]);
        let k2 = CompleteGraph::new(1).unwrap();
        assert_eq!(k2.edge_count(), 1);
        assert!(CompleteGraph::new(0).is_err());
    }

    #[test]
    fn complete_huge_is_implicit() {
        let g = CompleteGraph::new(1_000_000).unwrap();
        assert_eq!(g.vertex_count(), 1_000_001);
        assert_eq!(g.degree(17), 1_000_000);
        assert!(std::mem::size_of_val(&g) <= 8);
        assert_eq!(g.neighbors(0).nth(999_999), Some(1_000_000));
    }

    #[test]
    fn bipartite() {
        let c4 = CompleteBipartite::new(2).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!((0..4).all(|v| c4.degree(v) == 2));
        let g = CompleteBipartite::new(5).unwrap();
        assert_eq!(to_explicit(&g).edge_count(), 25);
        let big = CompleteBipartite::new(10_000).unwrap();
        assert_eq!(big.vertex_count(), 20_000);
        assert_eq!(min_degree(&big), 10_000);
    }

    #[test]
    fn clique_chain_shapes() {
        let k3 = CliqueChain::new(2, 1).unwrap();
        assert_eq!(to_explicit(&k3), to_explicit(&CompleteGraph::new(2).unwrap()));

        let bowtie = CliqueChain::new(2, 2).unwrap();
        assert_eq!(bowtie.vertex_count(), 5);
        assert_eq!(min_degree(&bowtie), 2);
        assert_eq!(bowtie.degree(2), 4);
        assert_eq!(bowtie.edge_count(), 6);

        let chain = CliqueChain::new(50, 20).unwrap();
        assert_eq!(chain.vertex_count(), 1001);
        assert_eq!(min_degree(&chain), 50);
        assert!(eccentricity(&chain, 0) >= 20);
        assert_eq!(to_explicit(&chain).edge_count(), chain.edge_count());
    }
}
