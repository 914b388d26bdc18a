use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{edges, EdgeKey, GraphView};
use crate::percolation::{derive_seed, materialize, EdgeCoin, PercolationOracle, DEFAULT_MATERIALIZE_LIMIT};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExchangeReport {
    pub host_edges: usize,
    pub alive_edges: usize,
    pub orders: usize,
    /// Orders whose alive set differed from materialization.
    pub mismatched_orders: usize,
}

impl ExchangeReport {
    pub fn passed(&self) -> bool {
        self.mismatched_orders == 0
    }
}

/// Queries every host edge in `orders` shuffled orders on fresh oracles and
/// compares each alive set with the materialized `G_p`.
pub fn check_exchangeability<G: GraphView + ?Sized>(
    g: &G,
    p: f64,
    seed: u64,
    orders: usize,
    shuffle_seed: u64,
) -> Result<ExchangeReport> {
    let coin = EdgeCoin::new(p, seed, 0)?;
    let reference = materialize(&coin, g, DEFAULT_MATERIALIZE_LIMIT)?;
    let mut expected: Vec<EdgeKey> = edges(&reference).collect();
    expected.sort_unstable();
    let mut host: Vec<EdgeKey> = edges(g).collect();
    let mut mismatched = 0;
    for i in 0..orders {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(shuffle_seed, i as u64));
        host.shuffle(&mut rng);
        let mut oracle = PercolationOracle::new(coin, g.vertex_count());
        let mut alive: Vec<EdgeKey> = host.iter().copied().filter(|&e| oracle.test(e)).collect();
        alive.sort_unstable();
        if alive != expected || oracle.tested_count() != host.len() {
            mismatched += 1;
        }
    }
    Ok(ExchangeReport {
        host_edges: host.len(),
        alive_edges: expected.len(),
        orders,
        mismatched_orders: mismatched,
    })
}
