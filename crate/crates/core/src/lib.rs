//! Lazy edge percolation on minimum-degree host graphs.
//!
//! The crate realizes the random subgraph `G_p` of a host graph `G` as a
//! seed-deterministic oracle, explores it with a depth-first search that keeps
//! track of which host edges were queried, and builds certified long paths and
//! cycles on top of the resulting forest. A Monte Carlo harness, bound
//! evaluators and an exact small-instance oracle live in [`harness`].

pub mod certify;
pub mod cycle;
pub mod dfs;
pub mod error;
pub mod forest;
pub mod graph;
pub mod harness;
pub mod path;
pub mod percolation;
pub mod pseudo_clique;

pub use error::{Error, Result};
pub use graph::{EdgeKey, ExplicitGraph, GraphView, VertexId};
pub use percolation::{EdgeCoin, PercolationOracle};

/// Natural logarithm of `k`, floored at zero. All `log k` thresholds use this.
pub fn log_k(k: usize) -> f64 {
    (k.max(1) as f64).ln()
}

/// Edge probability `c / k`, clamped into `[0, 1]`.
pub fn edge_probability(c: f64, k: usize) -> f64 {
    (c / k.max(1) as f64).clamp(0.0, 1.0)
}
