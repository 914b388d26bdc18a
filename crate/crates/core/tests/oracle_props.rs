mod common;

use common::arb_graph;
use percpath_core::graph::edges;
use percpath_core::harness::check_exchangeability;
use percpath_core::percolation::{materialize, materialize_union, split_sprinkle, DEFAULT_MATERIALIZE_LIMIT};
use percpath_core::{EdgeCoin, EdgeKey, GraphView, PercolationOracle};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alive_set_ignores_query_order(
        g in arb_graph(50),
        p in 0.0..=1.0f64,
        seed in any::<u64>(),
        perm_seed in any::<u64>(),
    ) {
        let report = check_exchangeability(&g, p, seed, 3, perm_seed).unwrap();
        prop_assert!(report.passed());
    }

    #[test]
    fn counters_stay_consistent(g in arb_graph(40), p in 0.0..=1.0f64, seed in any::<u64>(), peeks in 0usize..20) {
        let coin = EdgeCoin::new(p, seed, 0).unwrap();
        let mut oracle = PercolationOracle::new(coin, g.vertex_count());
        let all: Vec<EdgeKey> = edges(&g).collect();
        let split = all.len().saturating_sub(peeks.min(all.len()));
        for &e in &all[..split] {
            oracle.test(e);
        }
        for &e in &all[split..] {
            oracle.peek(e);
        }
        let c = oracle.counters();
        prop_assert_eq!(c.positive + c.negative, c.queries);
        prop_assert_eq!(c.queries + c.reveals, oracle.tested_count() as u64);
        prop_assert_eq!(oracle.tested_count(), all.len());
        let alive = all.iter().filter(|&&e| coin.alive(e)).count() as u64;
        prop_assert_eq!(c.positive + c.reveal_positive, alive);
    }

    #[test]
    fn union_materialization_is_any_round(g in arb_graph(30), c in 0.0..30.0f64, seed in any::<u64>()) {
        let k = 10;
        let s = split_sprinkle(seed, c, k).unwrap();
        let u = materialize_union(&s.rounds, &g, DEFAULT_MATERIALIZE_LIMIT).unwrap();
        for e in edges(&g) {
            prop_assert_eq!(u.has_edge(e.u, e.v), s.alive_in_union(e));
        }
        prop_assert!(s.union_probability() <= c / k as f64 + 1e-12);
    }
}

#[test]
fn budget_identity_on_grids() {
    for k in [10usize, 100, 1000, 10_000, 1_000_000] {
        for c in [0.5, 1.0, 2.0, 6.0, 20.0, 32.0, 100.0, 243.0, 300.0, 1024.0, 3125.0, 1e5] {
            if c > 3.0 * k as f64 {
                continue;
            }
            let s = split_sprinkle(1, c, k).unwrap();
            let p1 = s.round_probability();
            assert!(1.0 - (1.0 - p1).powi(3) <= c / k as f64 + 1e-15, "c = {c}, k = {k}");
        }
    }
}

#[test]
fn materialization_matches_coin() {
    let g = common::random_graph(50, 0.5, 3);
    let coin = EdgeCoin::new(0.4, 77, 2).unwrap();
    let m = materialize(&coin, &g, DEFAULT_MATERIALIZE_LIMIT).unwrap();
    for e in edges(&g) {
        assert_eq!(m.has_edge(e.u, e.v), coin.alive(e));
    }
    assert!(materialize(&coin, &g, 10).is_err());
}
