#![allow(dead_code)]

use percpath_core::{EdgeKey, ExplicitGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdos-Renyi `G(n, density)` drawn from `seed`.
pub fn random_graph(n: usize, density: f64, seed: u64) -> ExplicitGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(density) {
                edges.push(EdgeKey::new(u, v));
            }
        }
    }
    ExplicitGraph::from_edges(n, &edges).unwrap()
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = ExplicitGraph> {
    (1..=max_n, 0.0..=1.0f64, any::<u64>()).prop_map(|(n, d, s)| random_graph(n, d, s))
}
