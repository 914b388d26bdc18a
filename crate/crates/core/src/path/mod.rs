//! Long paths in `G_p`.
//!
//! Three procedures: the stack path of a DFS whose roots are drawn from a
//! priority set, a DFS path with greedy end extension for bipartite hosts,
//! and the three-round sprinkling construction of [`find_long_path`].

mod dense;
mod sprinkle;

pub use dense::{dense_window, find_dense_set, DenseWindow};
pub use sprinkle::{find_long_path, path_coins, path_epsilon, PathOptions};

use serde::{Deserialize, Serialize};

use crate::certify::{certify, CertifiedEdge};
use crate::dfs::{DfsExplorer, RootPolicy, StopCondition};
use crate::graph::{EdgeKey, GraphView, VertexId};
use crate::log_k;
use crate::percolation::PercolationOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathTag {
    StackPath,
    Bipartite,
    SprinkleCase1,
    SprinkleCase2,
    SprinkleCase3,
    PseudoCliqueRoute,
    Failed,
}

impl PathTag {
    pub fn name(self) -> &'static str {
        match self {
            PathTag::StackPath => "stack-path",
            PathTag::Bipartite => "bipartite",
            PathTag::SprinkleCase1 => "sprinkle-case1",
            PathTag::SprinkleCase2 => "sprinkle-case2",
            PathTag::SprinkleCase3 => "sprinkle-case3",
            PathTag::PseudoCliqueRoute => "pseudo-clique-route",
            PathTag::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PathDiagnostics {
    pub stage: String,
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub queries: u64,
    pub reveals: u64,
    pub roots: usize,
    /// `|R ∪ S|` at which the priority DFS halts.
    pub threshold: Option<usize>,
    /// Stack size when the threshold was hit, before the push-only extension.
    pub threshold_stack: Option<usize>,
    /// A component was completed with `|R| >= (1/2) log k` before the threshold.
    pub event_a: Option<bool>,
    /// Fewer than `(1-eps)k` positive answers among the first `k/p` queries.
    pub event_b: Option<bool>,
    pub budget_positives: Option<u64>,
    pub dense_set: Option<usize>,
    pub cycle_length: Option<usize>,
    pub a_size: Option<usize>,
    pub b_size: Option<usize>,
    pub cross_edges: Option<u64>,
    pub window_hits: Option<usize>,
    /// `|A ∪ C| >= k - 5 log k` in the few-cross-edges branch.
    pub union_bound_holds: Option<bool>,
    /// Fraction of `A'` attached to `C` by a round-2 edge.
    pub attach_rate: Option<f64>,
    /// Side sizes of the balanced bipartite graph.
    pub h_sizes: Option<[usize; 2]>,
    pub bipartite_path: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathResult {
    /// Number of edges.
    pub length: usize,
    pub start: Option<VertexId>,
    pub tag: PathTag,
    pub path: Vec<VertexId>,
    pub certificate: Vec<CertifiedEdge>,
    pub diagnostics: PathDiagnostics,
}

impl PathResult {
    pub(crate) fn new(
        path: Vec<VertexId>,
        tag: PathTag,
        certificate: Vec<CertifiedEdge>,
        diagnostics: PathDiagnostics,
    ) -> Self {
        PathResult {
            length: path.len().saturating_sub(1),
            start: path.first().copied(),
            tag,
            path,
            certificate,
            diagnostics,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("path result serializes")
    }
}

/// `|R ∪ S|` at which [`path_from_set`] stops: `ceil((1 - c^{-1/2})k)`,
/// at least 1.
pub fn stack_path_threshold(c: f64, k: usize) -> usize {
    let eps = if c > 0.0 { c.powf(-0.5).min(1.0) } else { 1.0 };
    (((1.0 - eps) * k as f64).ceil() as usize).max(1)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SetPathOptions {
    /// Replays the exploration on a fresh oracle up to `k/p` queries to
    /// evaluate event B.
    pub check_event_b: bool,
}

/// Stack path of a DFS taking roots from `v0` first, halted when `|R ∪ S|`
/// reaches `(1 - c^{-1/2})k` and then pushed on until the first pop. Tagged
/// failed when the threshold is never reached or the path is shorter than
/// `(1 - 2c^{-1/2})k`; the path is returned either way.
pub fn path_from_set<G: GraphView + ?Sized>(
    g: &G,
    oracle: &mut PercolationOracle,
    v0: &[VertexId],
    c: f64,
    k: usize,
    opts: &SetPathOptions,
) -> PathResult {
    let n = g.vertex_count();
    let p = oracle.coin().p();
    let eps = if c > 0.0 { c.powf(-0.5).min(1.0) } else { 1.0 };
    let t = stack_path_threshold(c, k).min(n);
    let mut diag = PathDiagnostics {
        n,
        p,
        epsilon: eps,
        threshold: Some(t),
        ..Default::default()
    };
    let mut dfs = DfsExplorer::new(g, RootPolicy::Priority(v0.to_vec()), false);
    dfs.run(oracle, StopCondition::ReachedSize(t));
    let reached = t > 0 && dfs.discovered() >= t;
    let half_log = 0.5 * log_k(k);
    diag.event_a = Some(
        dfs.roots()
            .iter()
            .skip(1)
            .any(|r| r.reached as f64 >= half_log),
    );
    if !reached {
        diag.stage = "threshold-not-reached".into();
        diag.queries = dfs.queries();
        diag.roots = dfs.roots().len();
        return PathResult::new(Vec::new(), PathTag::Failed, Vec::new(), diag);
    }
    diag.threshold_stack = Some(dfs.stack().len());
    dfs.run(oracle, StopCondition::BeforePop);
    let path = dfs.stack().to_vec();
    diag.queries = dfs.queries();
    diag.roots = dfs.roots().len();
    diag.stage = "threshold-reached".into();

    if opts.check_event_b && p > 0.0 {
        let budget = (k as f64 / p).ceil() as u64;
        let mut replay = PercolationOracle::new(*oracle.coin(), n);
        let mut again = DfsExplorer::new(g, RootPolicy::Priority(v0.to_vec()), false);
        again.run(&mut replay, StopCondition::QueryBudget(budget));
        let positives = again.positive_answers();
        diag.budget_positives = Some(positives);
        diag.event_b = Some((positives as f64) < (1.0 - eps) * k as f64);
    }

    let bound = (1.0 - 2.0 * eps) * k as f64;
    let tag = if (path.len().saturating_sub(1) as f64) < bound {
        diag.stage = "below-stack-bound".into();
        PathTag::Failed
    } else {
        PathTag::StackPath
    };
    let certificate = certify(&path, false, oracle);
    let host: Vec<VertexId> = path.iter().map(|&v| oracle.host_vertex(v)).collect();
    PathResult::new(host, tag, certificate, diag)
}

/// Deepest DFS root path, extended greedily at both ends through alive
/// edges to vertices off the path.
pub fn bipartite_long_path<G: GraphView + ?Sized>(
    g: &G,
    oracle: &mut PercolationOracle,
    c: f64,
    k: usize,
) -> PathResult {
    let n = g.vertex_count();
    let mut diag = PathDiagnostics {
        n,
        p: oracle.coin().p(),
        epsilon: if c > 0.0 { c.powf(-0.5) } else { 1.0 },
        ..Default::default()
    };
    let (path, queries, roots) = deep_path(g, oracle, k);
    diag.queries = queries;
    diag.roots = roots;
    diag.reveals = oracle.counters().reveals;
    diag.stage = if path.is_empty() { "empty-host" } else { "dfs-extended" }.into();
    let certificate = certify(&path, false, oracle);
    let host: Vec<VertexId> = path.iter().map(|&v| oracle.host_vertex(v)).collect();
    PathResult::new(host, PathTag::Bipartite, certificate, diag)
}

/// Local-id core of [`bipartite_long_path`]: the path, DFS queries and roots.
pub(crate) fn deep_path<G: GraphView + ?Sized>(
    g: &G,
    oracle: &mut PercolationOracle,
    k: usize,
) -> (Vec<VertexId>, u64, usize) {
    let n = g.vertex_count();
    if n == 0 {
        return (Vec::new(), 0, 0);
    }
    let mut dfs = DfsExplorer::new(g, RootPolicy::LowestIndex, false);
    dfs.run(oracle, StopCondition::ReachedSize(n));
    let mut path = dfs.deepest_path();
    let budget = ((4.0 * k as f64 * log_k(k)).ceil() as u64).max(64);
    extend_greedily(g, oracle, &mut path, budget);
    (path, dfs.queries(), dfs.roots().len())
}

/// Appends alive neighbors off the path at both ends until none is found or
/// `budget` fresh edges have been revealed. Tested edges reuse their known
/// outcome.
pub(crate) fn extend_greedily<G: GraphView + ?Sized>(
    g: &G,
    oracle: &mut PercolationOracle,
    path: &mut Vec<VertexId>,
    budget: u64,
) {
    if path.is_empty() {
        return;
    }
    let mut on_path = vec![false; g.vertex_count()];
    for &v in path.iter() {
        on_path[v as usize] = true;
    }
    let mut spent = 0u64;
    for _ in 0..2 {
        'grow: loop {
            let end = *path.last().unwrap();
            for w in g.neighbors(end) {
                if on_path[w as usize] {
                    continue;
                }
                let e = EdgeKey::new(end, w);
                let alive = if oracle.is_tested(e) {
                    oracle.outcome(e)
                } else {
                    if spent >= budget {
                        break 'grow;
                    }
                    spent += 1;
                    oracle.peek(e)
                };
                if alive {
                    on_path[w as usize] = true;
                    path.push(w);
                    continue 'grow;
                }
            }
            break;
        }
        path.reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::validate;
    use crate::graph::{CompleteBipartite, CompleteGraph};

    fn oracle(p: f64, n: usize, seed: u64) -> PercolationOracle {
        PercolationOracle::with_p(p, seed, 0, n).unwrap()
    }

    #[test]
    fn threshold_values() {
        assert_eq!(stack_path_threshold(100.0, 1000), 900);
        assert_eq!(stack_path_threshold(0.0, 10), 1);
    }

    #[test]
    fn full_probability_gives_hamilton_path_from_the_set() {
        let k = 40;
        let g = CompleteGraph::new(k).unwrap();
        let mut o = oracle(1.0, k + 1, 1);
        let r = path_from_set(&g, &mut o, &[0], k as f64, k, &SetPathOptions::default());
        assert_eq!(r.tag, PathTag::StackPath);
        assert_eq!(r.length, k);
        assert_eq!(r.start, Some(0));
        assert!(validate(&g, &r.path, &r.certificate, false, &[*o.coin()]).is_ok());
    }

    #[test]
    fn zero_probability_fails() {
        let g = CompleteGraph::new(30).unwrap();
        let mut o = oracle(0.0, 31, 1);
        let r = path_from_set(&g, &mut o, &[0, 1, 2, 3], 10.0, 30, &SetPathOptions::default());
        assert_eq!(r.tag, PathTag::Failed);
        assert_eq!(r.length, 0);
    }

    #[test]
    fn moderate_probability_meets_the_stack_bound() {
        let k = 2000;
        let c = 100.0;
        let g = CompleteGraph::new(k).unwrap();
        let v0 = [5, 17, 300, 999, 1500, 1999, 7, 8];
        let mut o = oracle(c / k as f64, k + 1, 4);
        let r = path_from_set(&g, &mut o, &v0, c, k, &SetPathOptions { check_event_b: true });
        assert!(r.length as f64 >= 0.8 * k as f64, "{}", r.length);
        assert!(v0.contains(&r.start.unwrap()));
        assert_eq!(r.diagnostics.event_a, Some(false));
        assert_eq!(r.diagnostics.event_b, Some(false));
        assert!(validate(&g, &r.path, &r.certificate, false, &[*o.coin()]).is_ok());
    }

    #[test]
    fn bipartite_extremes() {
        let k = 30;
        let g = CompleteBipartite::new(k).unwrap();
        let mut o = oracle(1.0, 2 * k, 2);
        let r = bipartite_long_path(&g, &mut o, k as f64, k);
        assert_eq!(r.length, 2 * k - 1);
        assert!(validate(&g, &r.path, &r.certificate, false, &[*o.coin()]).is_ok());

        let mut dead = oracle(0.0, 2 * k, 2);
        assert_eq!(bipartite_long_path(&g, &mut dead, 0.0, k).length, 0);
    }

    #[test]
    fn greedy_extension_reaches_both_ends() {
        let g = CompleteGraph::new(9).unwrap();
        let mut o = oracle(1.0, 10, 0);
        let mut path = vec![4, 5];
        extend_greedily(&g, &mut o, &mut path, 100);
        assert_eq!(path.len(), 10);
        let mut seen = path.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
    }
}
