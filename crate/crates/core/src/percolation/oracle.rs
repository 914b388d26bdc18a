use std::collections::HashSet;
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::Arc;

use serde::Serialize;

use super::coin::{mix64, EdgeCoin};
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, ExplicitGraph, GraphView, VertexId};

/// Hasher for packed edge keys, which are already well spread after `mix64`.
#[derive(Default)]
pub(crate) struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = mix64(self.0 ^ b as u64);
        }
    }
    fn write_u64(&mut self, x: u64) {
        self.0 = mix64(x);
    }
}

pub(crate) type KeySet = HashSet<u64, BuildHasherDefault<KeyHasher>>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleCounters {
    pub queries: u64,
    pub positive: u64,
    pub negative: u64,
    pub reveals: u64,
    pub reveal_positive: u64,
}

/// Lazy `G_p` with a record of which host edges have been looked at.
///
/// [`test`](Self::test) is an exploration query and is counted as such;
/// [`peek`](Self::peek) reveals an edge during a later construction step.
/// Both mark the edge tested.
#[derive(Clone, Debug)]
pub struct PercolationOracle {
    coin: EdgeCoin,
    tested: KeySet,
    tested_at: Vec<u32>,
    counters: OracleCounters,
    /// Host ids of local vertices when exploring a relabeled subgraph.
    labels: Option<Arc<[VertexId]>>,
}

impl PercolationOracle {
    pub fn new(coin: EdgeCoin, n: usize) -> Self {
        PercolationOracle {
            coin,
            tested: KeySet::default(),
            tested_at: vec![0; n],
            counters: OracleCounters::default(),
            labels: None,
        }
    }

    /// Oracle for a subgraph whose vertex `i` is host vertex `labels[i]`.
    /// Coins are drawn on host ids; bookkeeping stays in local ids.
    pub fn relabeled(coin: EdgeCoin, labels: Vec<VertexId>) -> Self {
        let mut o = Self::new(coin, labels.len());
        o.labels = Some(labels.into());
        o
    }

    /// The host edge whose coin decides the local edge `e`.
    pub fn host_edge(&self, e: EdgeKey) -> EdgeKey {
        match &self.labels {
            Some(l) => EdgeKey::new(l[e.u as usize], l[e.v as usize]),
            None => e,
        }
    }

    pub fn host_vertex(&self, v: VertexId) -> VertexId {
        match &self.labels {
            Some(l) => l[v as usize],
            None => v,
        }
    }

    pub fn with_p(p: f64, seed: u64, round: u32, n: usize) -> Result<Self> {
        Ok(Self::new(EdgeCoin::new(p, seed, round)?, n))
    }

    pub fn coin(&self) -> &EdgeCoin {
        &self.coin
    }

    pub fn vertex_count(&self) -> usize {
        self.tested_at.len()
    }

    /// The outcome without recording anything.
    pub fn outcome(&self, e: EdgeKey) -> bool {
        self.coin.alive(self.host_edge(e))
    }

    fn mark(&mut self, e: EdgeKey) {
        if self.tested.insert(e.packed()) {
            self.tested_at[e.u as usize] += 1;
            self.tested_at[e.v as usize] += 1;
        }
    }

    /// Exploration query. The caller guarantees `e` is a host edge.
    pub fn test(&mut self, e: EdgeKey) -> bool {
        self.mark(e);
        let alive = self.outcome(e);
        self.counters.queries += 1;
        if alive {
            self.counters.positive += 1;
        } else {
            self.counters.negative += 1;
        }
        alive
    }

    /// Like [`test`](Self::test) but rejects pairs that are not host edges.
    pub fn test_in<G: GraphView + ?Sized>(&mut self, g: &G, e: EdgeKey) -> Result<bool> {
        if !g.has_edge(e.u, e.v) {
            return Err(Error::NotHostEdge(e));
        }
        Ok(self.test(e))
    }

    /// Reveal used by construction steps after the exploration.
    pub fn peek(&mut self, e: EdgeKey) -> bool {
        self.mark(e);
        let alive = self.outcome(e);
        self.counters.reveals += 1;
        if alive {
            self.counters.reveal_positive += 1;
        }
        alive
    }

    pub fn peek_in<G: GraphView + ?Sized>(&mut self, g: &G, e: EdgeKey) -> Result<bool> {
        if !g.has_edge(e.u, e.v) {
            return Err(Error::NotHostEdge(e));
        }
        Ok(self.peek(e))
    }

    pub fn is_tested(&self, e: EdgeKey) -> bool {
        self.tested.contains(&e.packed())
    }

    pub fn tested_count(&self) -> usize {
        self.tested.len()
    }

    /// Number of tested host edges at `v`.
    pub fn tested_incident(&self, v: VertexId) -> usize {
        self.tested_at[v as usize] as usize
    }

    pub fn untested_incident<G: GraphView + ?Sized>(&self, g: &G, v: VertexId) -> usize {
        g.degree(v) - self.tested_incident(v)
    }

    pub fn counters(&self) -> OracleCounters {
        self.counters
    }

    pub fn tested_edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        self.tested.iter().map(|&k| EdgeKey::from_packed(k))
    }

    /// Adjacency arrays of the tested edges, for analytics that need to walk
    /// them per vertex.
    pub fn tested_graph(&self) -> ExplicitGraph {
        let n = self.tested_at.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        for &d in &self.tested_at {
            offsets.push(offsets.last().unwrap() + d as usize);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0 as VertexId; offsets[n]];
        for &k in &self.tested {
            let e = EdgeKey::from_packed(k);
            targets[fill[e.u as usize]] = e.v;
            fill[e.u as usize] += 1;
            targets[fill[e.v as usize]] = e.u;
            fill[e.v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        ExplicitGraph::from_csr_unchecked(offsets, targets)
    }
}
