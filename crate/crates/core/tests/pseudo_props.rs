mod common;

use common::{arb_graph, random_graph};
use percpath_core::pseudo_clique::{compute_a, compute_w, compute_x, degree_classes, two_core};
use percpath_core::{ExplicitGraph, GraphView};
use proptest::prelude::*;

fn count(m: &[bool]) -> usize {
    m.iter().filter(|&&b| b).count()
}

/// Largest vertex subset inducing minimum degree at least 2, by enumeration.
fn brute_two_core(g: &ExplicitGraph) -> Vec<bool> {
    let n = g.vertex_count();
    let mut best = 0u32;
    for mask in 0u32..1 << n {
        if mask.count_ones() <= best.count_ones() {
            continue;
        }
        let ok = (0..n).filter(|&v| mask >> v & 1 == 1).all(|v| {
            g.neighbor_slice(v as u32).iter().filter(|&&w| mask >> w & 1 == 1).count() >= 2
        });
        if ok {
            best = mask;
        }
    }
    (0..n).map(|v| best >> v & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn two_core_is_closed_and_maximal(g in arb_graph(200)) {
        let core = two_core(&g);
        let inside = |v: u32| g.neighbor_slice(v).iter().filter(|&&w| core[w as usize]).count();
        for v in 0..g.vertex_count() as u32 {
            if core[v as usize] {
                prop_assert!(inside(v) >= 2);
            } else {
                prop_assert!(inside(v) <= 1);
            }
        }
    }

    #[test]
    fn two_core_matches_enumeration(n in 1usize..=12, d in 0.0..0.6f64, seed in any::<u64>()) {
        let g = random_graph(n, d, seed);
        prop_assert_eq!(two_core(&g), brute_two_core(&g));
    }

    #[test]
    fn set_machinery_invariants(g in arb_graph(120), c in 0.0..60.0f64) {
        let n = g.vertex_count();
        let small = degree_classes(&g, c);
        for v in 0..n as u32 {
            prop_assert_eq!(small[v as usize], g.degree(v) as f64 <= c / 10.0);
        }
        let w = compute_w(&g, &small);
        for v in 0..n {
            prop_assert!(!w.union[v] || small[v]);
            prop_assert_eq!(w.union[v], w.w.iter().any(|s| s[v]));
        }
        let x = compute_x(&g, &small);
        prop_assert!(x.trace.len() <= n);
        prop_assert_eq!(x.trace.iter().sum::<usize>(), count(&x.x));
        prop_assert!(x.trace.iter().all(|&a| a > 0));
        // X is the least fixed point: nothing outside has 2 neighbors in S or X.
        for v in 0..n as u32 {
            let t = g.neighbor_slice(v).iter().filter(|&&u| small[u as usize] || x.x[u as usize]).count();
            prop_assert_eq!(x.x[v as usize], t >= 2);
        }
        let a = compute_a(&g, &w.union, &x.x);
        for v in 0..n {
            if a.a[v] {
                prop_assert!(a.v2[v] && !w.union[v] && !x.x[v] && !a.y[v]);
            }
        }
    }

    #[test]
    fn x_grows_with_the_small_set(g in arb_graph(80), extra in any::<u64>()) {
        let small = degree_classes(&g, 20.0);
        let bigger: Vec<bool> = small.iter().enumerate().map(|(i, &s)| s || (extra >> (i % 64)) & 1 == 1).collect();
        let a = compute_x(&g, &small);
        let b = compute_x(&g, &bigger);
        for v in 0..g.vertex_count() {
            prop_assert!(!a.x[v] || b.x[v]);
        }
    }
}
