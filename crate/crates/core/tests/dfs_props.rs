use percpath_core::dfs::{check_properties, run_dfs, RootPolicy, StopCondition};
use percpath_core::forest::{desc_within_batch, LevelIndex};
use percpath_core::dfs::RootedForest;
use percpath_core::graph::{GeneratorFamily, GeneratorSpec, Host};
use percpath_core::{edge_probability, EdgeCoin, EdgeKey, GraphView, PercolationOracle};
use proptest::prelude::*;

/// A host of `family` with at most 500 vertices.
fn host(family: GeneratorFamily, k: usize, seed: u64) -> (Host, usize) {
    let mut s = GeneratorSpec::new(family, k);
    s.seed = seed;
    match family {
        GeneratorFamily::CliqueChain => s.m = Some(4),
        GeneratorFamily::RandomRegular => s.n = Some(if k % 2 == 1 { 4 * k + 2 } else { 4 * k + 1 }),
        GeneratorFamily::PseudoClique => s.gamma = Some(0.5),
        _ => {}
    }
    (s.build().unwrap(), k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn exploration_properties_hold(
        fam in 0usize..5,
        k in 2usize..100,
        ci in 0usize..3,
        seed in any::<u64>(),
        priority in proptest::collection::vec(0u32..500, 0..4),
    ) {
        let (g, k) = host(GeneratorFamily::ALL[fam], k, seed);
        prop_assert!(g.vertex_count() <= 500);
        let c = [2.0, 8.0, 32.0][ci];
        let coin = EdgeCoin::new(edge_probability(c, k), seed, 0).unwrap();
        let n = g.vertex_count();
        let policy = if priority.is_empty() {
            RootPolicy::LowestIndex
        } else {
            RootPolicy::Priority(priority.iter().map(|&v| v % n as u32).collect())
        };
        let mut oracle = PercolationOracle::new(coin, n);
        let out = run_dfs(&g, &mut oracle, policy.clone(), StopCondition::None, true);
        prop_assert!(out.finished);
        let trace = out.trace.unwrap();
        let report = check_properties(&trace, &g, &coin).unwrap();
        prop_assert!(report.all_hold(), "{:?}", report);

        // Every forest edge is alive and every vertex was discovered.
        prop_assert_eq!(out.forest.discovered_count(), n);
        for v in 0..n as u32 {
            if let Some(p) = out.forest.parent(v) {
                prop_assert!(coin.alive(EdgeKey::new(p, v)));
            }
        }
        // Identical inputs give an identical trace.
        let mut again = PercolationOracle::new(coin, n);
        let replay = run_dfs(&g, &mut again, policy, StopCondition::None, true);
        prop_assert_eq!(replay.trace.unwrap().to_text(), trace.to_text());
    }

    #[test]
    fn descendant_counts_match_naive(parents in proptest::collection::vec(any::<u32>(), 1..200), d in 0usize..200) {
        // parent[v] < v keeps the array acyclic; ~1/4 of vertices become roots.
        let n = parents.len();
        let parent: Vec<u32> = (0..n)
            .map(|v| if v == 0 || parents[v] % 4 == 0 { u32::MAX } else { parents[v] % v as u32 })
            .collect();
        let f = RootedForest::from_parents(parent.clone());
        let fast = desc_within_batch(&f, d);
        let idx = LevelIndex::new(&f);
        let mut total = 0usize;
        let mut depth_sum = 0usize;
        for v in 0..n as u32 {
            let naive = (0..n as u32)
                .filter(|&w| w != v && f.is_ancestor_or_self(v, w) && f.depth(w) - f.depth(v) <= d)
                .count();
            prop_assert_eq!(fast[v as usize] as usize, naive);
            total += (0..n as u32).filter(|&w| w != v && f.is_ancestor_or_self(v, w)).count();
            depth_sum += f.depth(v);
            for i in 0..=f.depth(v) + 1 {
                prop_assert_eq!(idx.ancestor_at(v, i).is_some(), i <= f.depth(v));
            }
            // Walking parents agrees with the level index.
            let mut u = v;
            for i in 0..=f.depth(v) {
                prop_assert_eq!(idx.ancestor_at(v, i), Some(u));
                u = parent[u as usize];
            }
        }
        prop_assert_eq!(total, depth_sum);
    }
}

#[test]
fn query_budget_on_the_complete_graph() {
    // Each DFS-time query is charged to a vertex; a small instance of the budget check.
    let k = 400;
    let c = 20.0;
    let g = percpath_core::graph::CompleteGraph::new(k).unwrap();
    let n = g.vertex_count() as f64;
    let mut within = 0;
    for seed in 0..20 {
        let mut oracle = PercolationOracle::with_p(c / k as f64, seed, 0, g.vertex_count()).unwrap();
        let out = run_dfs(&g, &mut oracle, RootPolicy::LowestIndex, StopCondition::None, false);
        if out.queries as f64 <= 2.0 * n * k as f64 / c {
            within += 1;
        }
    }
    assert!(within >= 19, "{within}/20");
}
