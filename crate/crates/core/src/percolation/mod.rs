//! Seed-deterministic lazy realization of `G_p`.
//!
//! Whether a host edge survives is a pure function of `(seed, round, edge)`,
//! so `G_p` is a fixed object per seed. [`PercolationOracle`] adds the
//! tested/untested bookkeeping on top: querying an edge only records that the
//! exploration has looked at it.

mod coin;
mod oracle;

pub use coin::{derive_seed, mix64, EdgeCoin};
pub use oracle::{OracleCounters, PercolationOracle};

use crate::error::{Error, Result};
use crate::graph::{edges, ExplicitGraph, GraphView};

/// Materialization refuses hosts with more edges than this unless the caller
/// passes a larger limit.
pub const DEFAULT_MATERIALIZE_LIMIT: u64 = 10_000_000;

/// Three independent rounds with `p_i = c / (3k)` whose union
/// under-approximates `G_{c/k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SprinkleSet {
    pub rounds: [EdgeCoin; 3],
}

impl SprinkleSet {
    pub fn round_probability(&self) -> f64 {
        self.rounds[0].p()
    }

    /// `1 - (1-p_1)(1-p_2)(1-p_3)`.
    pub fn union_probability(&self) -> f64 {
        1.0 - self.rounds.iter().map(|c| 1.0 - c.p()).product::<f64>()
    }

    pub fn alive_in_union(&self, e: crate::graph::EdgeKey) -> bool {
        self.rounds.iter().any(|c| c.alive(e))
    }
}

/// Round tags 1, 2 and 3 share `seed`; tag 0 is the full-budget round.
pub fn split_sprinkle(seed: u64, c: f64, k: usize) -> Result<SprinkleSet> {
    if k == 0 || !(c >= 0.0) {
        return Err(Error::InvalidParameter(format!("bad sprinkle parameters c = {c}, k = {k}")));
    }
    let p = c / (3.0 * k as f64);
    if p > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "per-round probability c/(3k) = {p} exceeds 1"
        )));
    }
    Ok(SprinkleSet {
        rounds: [
            EdgeCoin::new(p, seed, 1)?,
            EdgeCoin::new(p, seed, 2)?,
            EdgeCoin::new(p, seed, 3)?,
        ],
    })
}

/// The explicit subgraph of all alive host edges.
pub fn materialize<G: GraphView + ?Sized>(
    coin: &EdgeCoin,
    g: &G,
    max_edges: u64,
) -> Result<ExplicitGraph> {
    materialize_where(g, max_edges, |e| coin.alive(e))
}

/// Edges alive in at least one of `coins`.
pub fn materialize_union<G: GraphView + ?Sized>(
    coins: &[EdgeCoin],
    g: &G,
    max_edges: u64,
) -> Result<ExplicitGraph> {
    materialize_where(g, max_edges, |e| coins.iter().any(|c| c.alive(e)))
}

fn materialize_where<G: GraphView + ?Sized>(
    g: &G,
    max_edges: u64,
    alive: impl Fn(crate::graph::EdgeKey) -> bool,
) -> Result<ExplicitGraph> {
    let m = g.edge_count();
    if m > max_edges {
        return Err(Error::SizeGuard {
            what: "host edges",
            actual: m,
            limit: max_edges,
        });
    }
    let kept: Vec<_> = edges(g).filter(|&e| alive(e)).collect();
    ExplicitGraph::from_edges(g.vertex_count(), &kept)
}
