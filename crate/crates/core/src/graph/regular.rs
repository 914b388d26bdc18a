use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EdgeKey, ExplicitGraph, VertexId};
use crate::error::{Error, Result};

const MAX_RESTARTS: usize = 200;
const STALL_LIMIT: usize = 64;

/// Simple `k`-regular graph on `n` vertices.
///
/// Points are paired uniformly at random, refusing pairs that would create a
/// loop or a repeated edge; when the leftover points admit no legal pair the
/// whole pairing restarts. Deterministic per seed.
pub fn gen_random_regular(k: usize, n: usize, seed: u64) -> Result<ExplicitGraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if n <= k {
        return Err(Error::InvalidParameter(format!("need n > k, got n = {n}, k = {k}")));
    }
    if (n * k) % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n*k = {} is odd", n * k)));
    }
    if n >= VertexId::MAX as usize {
        return Err(Error::InvalidParameter("n too large".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESTARTS {
        if let Some(edges) = try_pairing(k, n, &mut rng) {
            return ExplicitGraph::from_edges(n, &edges);
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no simple {k}-regular pairing on {n} vertices after {MAX_RESTARTS} restarts"
    )))
}

fn try_pairing(k: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<EdgeKey>> {
    let mut points: Vec<VertexId> = (0..n as VertexId)
        .flat_map(|v| std::iter::repeat_n(v, k))
        .collect();
    let mut present: HashSet<EdgeKey> = HashSet::with_capacity(n * k / 2);
    let mut edges = Vec::with_capacity(n * k / 2);
    let mut stalls = 0;
    while !points.is_empty() {
        let i = rng.gen_range(0..points.len());
        let mut j = rng.gen_range(0..points.len() - 1);
        if j >= i {
            j += 1;
        }
        let (u, v) = (points[i], points[j]);
        let e = EdgeKey::new(u, v);
        if u != v && !present.contains(&e) {
            present.insert(e);
            edges.push(e);
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            points.swap_remove(hi);
            points.swap_remove(lo);
            stalls = 0;
            continue;
        }
        stalls += 1;
        if stalls >= STALL_LIMIT {
            // Near the end only a few legal pairs may remain; look for one.
            let legal = (0..points.len()).any(|a| {
                (a + 1..points.len()).any(|b| {
                    points[a] != points[b] && !present.contains(&EdgeKey::new(points[a], points[b]))
                })
            });
            if !legal {
                return None;
            }
            stalls = 0;
        }
    }
    Some(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphView;

    #[test]
    fn only_two_regular_graph_on_three_vertices_is_the_triangle() {
        for seed in 0..5 {
            let g = gen_random_regular(2, 3, seed).unwrap();
            assert_eq!(g.edge_count(), 3);
            assert!((0..3).all(|v| g.degree(v) == 2));
        }
    }

    #[test]
    fn cubic_graph() {
        let g = gen_random_regular(3, 8, 42).unwrap();
        assert!((0..8).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn parity_and_order_rejected() {
        assert!(gen_random_regular(3, 5, 1).is_err());
        assert!(gen_random_regular(4, 4, 1).is_err());
        assert!(gen_random_regular(0, 4, 1).is_err());
    }

    #[test]
    fn deterministic_and_scales_to_large_degree() {
        let a = gen_random_regular(40, 2000, 7).unwrap();
        let b = gen_random_regular(40, 2000, 7).unwrap();
        assert_eq!(a, b);
        assert!((0..2000).all(|v| a.degree(v) == 40));
        assert_ne!(a, gen_random_regular(40, 2000, 8).unwrap());
    }
}
