//! Long cycles in `G_p` from a completed DFS forest.
//!
//! After the exploration, either many vertices see many untested host edges
//! to far ancestors, and one of those edges is revealed to close a long
//! cycle with the tree path, or the forest has a deep vertical path through
//! which a zig-zag cycle is assembled from revealed back edges.

mod zigzag;

pub use zigzag::{select_vertical_path, zigzag_splice, VerticalPath};

use serde::{Deserialize, Serialize};

use crate::certify::{certify, CertifiedEdge};
use crate::dfs::{DfsExplorer, RootPolicy, RootedForest, StopCondition};
use crate::error::{Error, Result};
use crate::forest::classify;
use crate::graph::{Adjacency, EdgeKey, GraphView, VertexId};
use crate::percolation::{EdgeCoin, PercolationOracle};
use crate::{edge_probability, log_k};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleTag {
    BackEdge,
    ZigZag,
    Failed,
}

impl CycleTag {
    pub fn name(self) -> &'static str {
        match self {
            CycleTag::BackEdge => "back-edge",
            CycleTag::ZigZag => "zig-zag",
            CycleTag::Failed => "failed",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleRoute {
    /// Far back edge when enough vertices qualify, else zig-zag, else the
    /// best back edge found by a bounded search.
    #[default]
    Auto,
    BackEdgeOnly,
    ZigZagOnly,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CycleOptions {
    /// Overrides `eps = c^{-1/5}`.
    pub epsilon: Option<f64>,
    pub route: CycleRoute,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CycleDiagnostics {
    pub stage: String,
    pub n: usize,
    pub p: f64,
    pub queries: u64,
    pub reveals: u64,
    pub roots: usize,
    pub max_depth: usize,
    /// Integer form of the `(1-5eps)k` distance for far back edges.
    pub long_distance: usize,
    /// Vertices with at least `eps k` untested far ancestor edges.
    pub violators: usize,
    pub free: Option<usize>,
    pub down: Option<usize>,
    pub skinny: Option<usize>,
    pub x_size: Option<usize>,
    pub y_size: Option<usize>,
    pub path_top: Option<VertexId>,
    pub path_marked: Option<usize>,
    /// Path vertices scanned per window.
    pub windows: Vec<usize>,
    /// Smallest `d(w, u_1)` over the vertices scanned in the second window.
    pub second_window_gap: Option<usize>,
    pub reached_2k: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleResult {
    /// Number of vertices on the cycle.
    pub length: usize,
    pub tag: CycleTag,
    pub cycle: Vec<VertexId>,
    /// Number of revealed back edges the cycle uses.
    pub j: usize,
    pub epsilon: f64,
    pub certificate: Vec<CertifiedEdge>,
    pub diagnostics: CycleDiagnostics,
}

impl CycleResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cycle result serializes")
    }
}

/// `eps = c^{-1/5}`.
pub fn cycle_epsilon(c: f64) -> f64 {
    c.powf(-0.2)
}

/// Integer distance for "d(u, v) >= (1-5eps)k", never below 2 so that a
/// back edge always closes a cycle.
pub fn long_distance(eps: f64, k: usize) -> usize {
    ((1.0 - 5.0 * eps) * k as f64).ceil().max(2.0) as usize
}

/// Runs the construction on `g` with a fresh round-0 oracle at
/// `p = min(1, c/k)`.
pub fn find_long_cycle<G: GraphView + ?Sized>(
    g: &G,
    k: usize,
    c: f64,
    seed: u64,
    opts: &CycleOptions,
) -> Result<CycleResult> {
    if k == 0 || !(c >= 0.0) {
        return Err(Error::InvalidParameter(format!("need k >= 1 and c >= 0, got k = {k}, c = {c}")));
    }
    let coin = EdgeCoin::new(edge_probability(c, k), seed, 0)?;
    let mut oracle = PercolationOracle::new(coin, g.vertex_count());
    Ok(find_cycle_with(g, &mut oracle, k, c, opts))
}

/// The construction against a caller-supplied fresh oracle. Returned
/// vertices and certificate edges are in the oracle's host ids.
pub fn find_cycle_with<G: GraphView + ?Sized>(
    g: &G,
    oracle: &mut PercolationOracle,
    k: usize,
    c: f64,
    opts: &CycleOptions,
) -> CycleResult {
    let eps = opts.epsilon.unwrap_or_else(|| cycle_epsilon(c));
    let mut diag = CycleDiagnostics {
        n: g.vertex_count(),
        p: oracle.coin().p(),
        ..Default::default()
    };
    let mut dfs = DfsExplorer::new(g, RootPolicy::LowestIndex, false);
    dfs.run(oracle, StopCondition::None);
    diag.queries = dfs.queries();
    diag.roots = dfs.roots().len();
    let tree_edges = dfs.positive_answers();
    let (forest, _) = dfs.into_parts();
    diag.max_depth = forest.max_depth();
    let far = long_distance(eps, k);
    diag.long_distance = far;
    let kf = k as f64;

    if oracle.counters().positive > tree_edges {
        if let Some((u, v)) = tested_long_chord(&forest, oracle, far) {
            diag.stage = "tested-chord".into();
            return back_edge_result(&forest, oracle, u, v, eps, diag);
        }
    }

    let counts = long_untested_counts(g, &forest, oracle, far);
    let mut violators: Vec<VertexId> = (0..g.vertex_count() as VertexId)
        .filter(|&v| counts[v as usize] as f64 >= eps * kf)
        .collect();
    diag.violators = violators.len();

    if opts.route != CycleRoute::ZigZagOnly && violators.len() as f64 > 2.0 * log_k(k) {
        violators.sort_by_key(|&v| (std::cmp::Reverse(forest.depth(v)), v));
        let budget = ((2.0 * eps * kf * log_k(k)).ceil() as u64).max(16);
        if let Some((u, v)) = close_back_edge(g, &forest, oracle, &violators, far, budget) {
            diag.stage = "far-back-edge".into();
            return back_edge_result(&forest, oracle, u, v, eps, diag);
        }
        diag.stage = "far-back-edge-peeks-failed".into();
    }
    if opts.route == CycleRoute::BackEdgeOnly {
        return failed(eps, diag, oracle);
    }

    let cls = classify(&forest, oracle, g, eps, k);
    let counts_cls = cls.counts();
    diag.free = Some(counts_cls.free);
    diag.down = Some(counts_cls.down);
    diag.skinny = Some(counts_cls.skinny);
    let n = g.vertex_count();
    let mut in_x = vec![false; n];
    for &v in &violators {
        in_x[v as usize] = true;
    }
    for v in 0..n {
        in_x[v] |= !cls.free[v];
    }
    diag.x_size = Some(in_x.iter().filter(|&&b| b).count());
    diag.y_size = Some(cls.skinny.iter().filter(|&&b| !b).count());
    let marked: Vec<bool> = (0..n).map(|v| in_x[v] || !cls.skinny[v]).collect();

    match zigzag::run(g, &forest, oracle, &marked, eps, k, &mut diag) {
        Some((cycle, j)) => {
            let host: Vec<VertexId> = cycle.iter().map(|&v| oracle.host_vertex(v)).collect();
            let certificate = certify(&cycle, true, oracle);
            diag.reveals = oracle.counters().reveals;
            CycleResult {
                length: host.len(),
                tag: CycleTag::ZigZag,
                cycle: host,
                j,
                epsilon: eps,
                certificate,
                diagnostics: diag,
            }
        }
        None if opts.route == CycleRoute::Auto => {
            // Bounded search over every vertex for any alive back edge.
            let mut order: Vec<VertexId> = forest.order().to_vec();
            order.sort_by_key(|&v| (std::cmp::Reverse(forest.depth(v)), v));
            let budget = ((kf * log_k(k)).ceil() as u64).max(64);
            match close_back_edge(g, &forest, oracle, &order, 2, budget) {
                Some((u, v)) => {
                    diag.stage = format!("{}; fallback-back-edge", diag.stage);
                    back_edge_result(&forest, oracle, u, v, eps, diag)
                }
                None => failed(eps, diag, oracle),
            }
        }
        None => failed(eps, diag, oracle),
    }
}

fn failed(eps: f64, mut diag: CycleDiagnostics, oracle: &PercolationOracle) -> CycleResult {
    diag.reveals = oracle.counters().reveals;
    if diag.stage.is_empty() {
        diag.stage = "no-construction".into();
    }
    CycleResult {
        length: 0,
        tag: CycleTag::Failed,
        cycle: Vec::new(),
        j: 0,
        epsilon: eps,
        certificate: Vec::new(),
        diagnostics: diag,
    }
}

/// Closes the tree path from ancestor `u` down to `v` with the edge `uv`.
fn back_edge_result(
    forest: &RootedForest,
    oracle: &PercolationOracle,
    u: VertexId,
    v: VertexId,
    eps: f64,
    mut diag: CycleDiagnostics,
) -> CycleResult {
    let path = forest.root_path(v);
    let cycle = path[forest.depth(u)..].to_vec();
    let certificate = certify(&cycle, true, oracle);
    diag.reveals = oracle.counters().reveals;
    let host: Vec<VertexId> = cycle.iter().map(|&x| oracle.host_vertex(x)).collect();
    CycleResult {
        length: host.len(),
        tag: CycleTag::BackEdge,
        cycle: host,
        j: 1,
        epsilon: eps,
        certificate,
        diagnostics: diag,
    }
}

/// A tested alive non-tree edge between an ancestor and a descendant at
/// distance at least `far`, the longest one first.
fn tested_long_chord(
    forest: &RootedForest,
    oracle: &PercolationOracle,
    far: usize,
) -> Option<(VertexId, VertexId)> {
    oracle
        .tested_edges()
        .filter_map(|e| {
            let (a, b) = if forest.depth(e.u) <= forest.depth(e.v) {
                (e.u, e.v)
            } else {
                (e.v, e.u)
            };
            let d = forest.depth(b) - forest.depth(a);
            (d >= far && forest.is_ancestor_or_self(a, b) && oracle.outcome(e)).then_some((d, a, b))
        })
        .max()
        .map(|(_, a, b)| (a, b))
}

/// For every vertex `v`, the number of untested host edges `uv` with `u` an
/// ancestor of `v` at distance at least `far`.
pub fn long_untested_counts<G: GraphView + ?Sized>(
    g: &G,
    forest: &RootedForest,
    oracle: &PercolationOracle,
    far: usize,
) -> Vec<u32> {
    let n = g.vertex_count();
    let mut counts = vec![0i64; n];
    for v in 0..n as VertexId {
        if !forest.is_discovered(v) {
            continue;
        }
        let d = forest.depth(v);
        let far_ancestor = |u: VertexId| {
            forest.depth(u) + far <= d && forest.is_ancestor_or_self(u, v)
        };
        counts[v as usize] = if g.is_cofinite() {
            let missing = match g.adjacency(v) {
                Adjacency::Span { missing, .. } => missing.iter().filter(|&&u| far_ancestor(u)).count(),
                Adjacency::List(_) => 0,
            };
            (d + 1).saturating_sub(far) as i64 - missing as i64
        } else {
            g.neighbors(v).filter(|&u| far_ancestor(u)).count() as i64
        };
    }
    for e in oracle.tested_edges() {
        let (a, b) = if forest.depth(e.u) <= forest.depth(e.v) {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        };
        if forest.depth(a) + far <= forest.depth(b) && forest.is_ancestor_or_self(a, b) {
            counts[b as usize] -= 1;
        }
    }
    counts.into_iter().map(|c| c.max(0) as u32).collect()
}

/// Peeks untested far ancestor edges of `candidates` in the given order,
/// shallowest ancestor first, and returns the first alive one as
/// `(ancestor, descendant)`.
fn close_back_edge<G: GraphView + ?Sized>(
    g: &G,
    forest: &RootedForest,
    oracle: &mut PercolationOracle,
    candidates: &[VertexId],
    far: usize,
    budget: u64,
) -> Option<(VertexId, VertexId)> {
    let mut peeks = 0u64;
    for &v in candidates {
        let d = forest.depth(v);
        if d < far {
            continue;
        }
        let path = forest.root_path(v);
        for &u in &path[..=d - far] {
            let e = EdgeKey::new(u, v);
            if !g.has_edge(u, v) || oracle.is_tested(e) {
                continue;
            }
            if peeks == budget {
                return None;
            }
            peeks += 1;
            if oracle.peek(e) {
                return Some((u, v));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::validate;
    use crate::graph::{CliqueChain, CompleteGraph};

    fn check(g: &impl GraphView, r: &CycleResult, p: f64, seed: u64) {
        let coin = EdgeCoin::new(p, seed, 0).unwrap();
        validate(g, &r.cycle, &r.certificate, true, &[coin]).unwrap();
        assert_eq!(r.length, r.cycle.len());
    }

    #[test]
    fn complete_graph_at_p_one_gives_hamilton_cycle() {
        let k = 200;
        let g = CompleteGraph::new(k).unwrap();
        let r = find_long_cycle(&g, k, k as f64, 5, &CycleOptions::default()).unwrap();
        assert_eq!(r.tag, CycleTag::BackEdge);
        assert_eq!(r.length, k + 1);
        check(&g, &r, 1.0, 5);
    }

    #[test]
    fn subcritical_fails_softly() {
        let k = 500;
        let g = CompleteGraph::new(k).unwrap();
        let r = find_long_cycle(&g, k, 0.0, 1, &CycleOptions::default()).unwrap();
        assert_eq!(r.tag, CycleTag::Failed);
        assert_eq!(r.length, 0);
        assert!(!r.diagnostics.stage.is_empty());
    }

    #[test]
    fn clique_chain_back_edge() {
        let g = CliqueChain::new(20, 30).unwrap();
        let r = find_long_cycle(&g, 20, 40.0, 3, &CycleOptions::default()).unwrap();
        assert_eq!(r.tag, CycleTag::BackEdge);
        assert!(r.length >= 20);
        check(&g, &r, 1.0, 3);
    }

    #[test]
    fn moderate_density_cycle_is_certified() {
        let k = 2000;
        let g = CompleteGraph::new(k).unwrap();
        for seed in 0..3 {
            let r = find_long_cycle(&g, k, 50.0, seed, &CycleOptions::default()).unwrap();
            assert_ne!(r.tag, CycleTag::Failed);
            check(&g, &r, 50.0 / k as f64, seed);
            assert!(r.length as f64 >= (1.0 - 5.0 * cycle_epsilon(50.0)).max(0.0) * k as f64);
        }
    }

    #[test]
    fn far_counts_match_naive() {
        let g = CompleteGraph::new(60).unwrap();
        let mut o = PercolationOracle::with_p(0.2, 8, 0, 61).unwrap();
        let mut dfs = DfsExplorer::new(&g, RootPolicy::LowestIndex, false);
        dfs.run(&mut o, StopCondition::None);
        let f = dfs.forest();
        for far in [2, 5, 17] {
            let counts = long_untested_counts(&g, &f, &o, far);
            for v in 0..61u32 {
                let naive = (0..61u32)
                    .filter(|&u| {
                        u != v
                            && f.is_ancestor_or_self(u, v)
                            && f.depth(v) - f.depth(u) >= far
                            && !o.is_tested(EdgeKey::new(u, v))
                    })
                    .count();
                assert_eq!(counts[v as usize] as usize, naive);
            }
        }
    }
}
