use serde::{Deserialize, Serialize};

use super::dense::find_dense_set;
use super::{deep_path, PathDiagnostics, PathResult, PathTag};
use crate::certify::certify_rounds;
use crate::cycle::{find_cycle_with, CycleOptions, CycleTag};
use crate::dfs::{DfsExplorer, RootPolicy, StopCondition};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Adjacency, EdgeKey, ExplicitGraph, GraphView, VertexId, NONE};
use crate::percolation::{split_sprinkle, EdgeCoin, PercolationOracle};
use crate::{edge_probability, log_k};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathOptions {
    /// Try the dense-set shortcut before sprinkling.
    pub dense_shortcut: bool,
    /// Overrides `eps = 5 (c/3)^{-1/5}`.
    pub epsilon: Option<f64>,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            dense_shortcut: true,
            epsilon: None,
        }
    }
}

/// `eps = 5 (c/3)^{-1/5}`.
pub fn path_epsilon(c: f64) -> f64 {
    5.0 * (c / 3.0).powf(-0.2)
}

/// Every coin a [`find_long_path`] certificate may cite: the full-budget
/// round 0 and the three sprinkle rounds.
pub fn path_coins(seed: u64, c: f64, k: usize) -> Result<Vec<EdgeCoin>> {
    let c = c.min(3.0 * k.max(1) as f64);
    let mut coins = vec![EdgeCoin::new(edge_probability(c, k), seed, 0)?];
    coins.extend(split_sprinkle(seed, c, k)?.rounds);
    Ok(coins)
}

/// Long path in `G_{c/k}`: the opened cycle of a dense vertex set if one
/// exists, otherwise a round-1 cycle extended or re-routed with rounds 2
/// and 3 of a sprinkle split. `c` is clamped to `3k` so that every round
/// probability is at most 1.
pub fn find_long_path<G: GraphView + ?Sized>(
    g: &G,
    k: usize,
    c: f64,
    seed: u64,
    opts: &PathOptions,
) -> Result<PathResult> {
    if k == 0 || !(c >= 0.0) {
        return Err(Error::InvalidParameter(format!("need k >= 1 and c >= 0, got k = {k}, c = {c}")));
    }
    let c = c.min(3.0 * k as f64);
    let eps = opts.epsilon.unwrap_or_else(|| path_epsilon(c));
    let n = g.vertex_count();
    let mut diag = PathDiagnostics {
        n,
        p: edge_probability(c, k),
        epsilon: eps,
        ..Default::default()
    };

    if opts.dense_shortcut {
        if let Some(set) = find_dense_set(g, k, eps) {
            diag.dense_set = Some(set.len());
            let coin = EdgeCoin::new(edge_probability(c, k), seed, 0)?;
            let cycle = cycle_on(g, &set, coin, k, c, &mut diag);
            diag.stage = "dense-set".into();
            return Ok(finish(cycle, PathTag::PseudoCliqueRoute, &[coin], diag));
        }
    }

    let sprinkle = split_sprinkle(seed, c, k)?;
    let coins = sprinkle.rounds;
    let mut round1 = PercolationOracle::new(coins[0], n);
    let first = find_cycle_with(g, &mut round1, k, c / 3.0, &CycleOptions::default());
    diag.queries = round1.counters().queries;
    diag.reveals = round1.counters().reveals;
    if first.tag == CycleTag::Failed {
        diag.stage = "round-1-no-cycle".into();
        let mut replay = PercolationOracle::new(coins[0], n);
        let (path, _, _) = deep_path(g, &mut replay, k);
        return Ok(finish(path, PathTag::Failed, &coins, diag));
    }
    let cycle = orient(first.cycle);
    diag.cycle_length = Some(cycle.len());
    if cycle.len() > k {
        diag.stage = "round-1-cycle".into();
        return Ok(finish(cycle, PathTag::SprinkleCase1, &coins, diag));
    }

    let mut s = Sprinkle::new(g, k, eps, coins, cycle);
    diag.a_size = Some(s.a.len());
    diag.b_size = Some(s.b.len());
    let (tag, found) = if s.a.len() as f64 <= 10.0 * eps * k as f64 {
        s.small_a(c, &mut diag)
    } else {
        (PathTag::SprinkleCase3, s.large_a(&mut diag))
    };
    let opened = s.cycle.clone();
    let path = match found {
        Some(p) if p.len() > opened.len() => p,
        _ => {
            if diag.stage.is_empty() {
                diag.stage = "fallback-round-1-cycle".into();
            } else {
                diag.stage = format!("{}; fallback-round-1-cycle", diag.stage);
            }
            opened
        }
    };
    Ok(finish(path, tag, &coins, diag))
}

fn finish(path: Vec<VertexId>, tag: PathTag, coins: &[EdgeCoin], diag: PathDiagnostics) -> PathResult {
    let certificate = certify_rounds(&path, false, coins);
    PathResult::new(path, tag, certificate, diag)
}

/// Cycle of `G_p[set]` in host ids, empty when none is found.
fn cycle_on<G: GraphView + ?Sized>(
    g: &G,
    set: &[VertexId],
    coin: EdgeCoin,
    k: usize,
    c: f64,
    diag: &mut PathDiagnostics,
) -> Vec<VertexId> {
    let result = if set.len() == g.vertex_count() {
        let mut o = PercolationOracle::new(coin, set.len());
        let r = find_cycle_with(g, &mut o, k, c, &CycleOptions::default());
        diag.queries += o.counters().queries;
        diag.reveals += o.counters().reveals;
        r
    } else {
        let (h, labels) = induced_subgraph(g, set);
        let mut o = PercolationOracle::relabeled(coin, labels);
        let r = find_cycle_with(&h, &mut o, k, c, &CycleOptions::default());
        diag.queries += o.counters().queries;
        diag.reveals += o.counters().reveals;
        r
    };
    diag.cycle_length = Some(result.length);
    result.cycle
}

/// Rotates the cycle to start at its smallest vertex and walks toward the
/// smaller of that vertex's two cycle neighbors.
fn orient(mut cycle: Vec<VertexId>) -> Vec<VertexId> {
    let Some(i) = (0..cycle.len()).min_by_key(|&i| cycle[i]) else {
        return cycle;
    };
    cycle.rotate_left(i);
    if cycle.len() > 2 && cycle[cycle.len() - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// The cycle read as a path that ends at position `end`.
fn open_at(cycle: &[VertexId], end: usize) -> Vec<VertexId> {
    let m = cycle.len();
    (1..=m).map(|i| cycle[(end + i) % m]).collect()
}

struct Sprinkle<'g, G: GraphView + ?Sized> {
    g: &'g G,
    k: usize,
    eps: f64,
    coins: [EdgeCoin; 3],
    cycle: Vec<VertexId>,
    /// Position on the cycle, `NONE` off it.
    pos: Vec<VertexId>,
    /// Host neighbors on the cycle, for vertices off it.
    on_cycle: Vec<u32>,
    a: Vec<VertexId>,
    b: Vec<VertexId>,
    in_b: Vec<bool>,
}

impl<'g, G: GraphView + ?Sized> Sprinkle<'g, G> {
    fn new(g: &'g G, k: usize, eps: f64, coins: [EdgeCoin; 3], cycle: Vec<VertexId>) -> Self {
        let n = g.vertex_count();
        let mut pos = vec![NONE; n];
        let mut mask = vec![false; n];
        for (i, &v) in cycle.iter().enumerate() {
            pos[v as usize] = i as VertexId;
            mask[v as usize] = true;
        }
        let prefix = prefix_counts(&mask);
        let threshold = (1.0 - 20.0 * eps) * k as f64;
        let mut on_cycle = vec![0u32; n];
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for v in 0..n as VertexId {
            if mask[v as usize] {
                continue;
            }
            let d = count_in(g, v, &mask, &prefix);
            on_cycle[v as usize] = d as u32;
            if d as f64 >= threshold {
                a.push(v);
            } else {
                b.push(v);
            }
        }
        let mut in_b = vec![false; n];
        for &v in &b {
            in_b[v as usize] = true;
        }
        Sprinkle {
            g,
            k,
            eps,
            coins,
            cycle,
            pos,
            on_cycle,
            a,
            b,
            in_b,
        }
    }

    /// Cycle neighbors of `v` in cycle order.
    fn cycle_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = if self.g.degree(v) <= self.cycle.len() {
            self.g
                .neighbors(v)
                .filter(|&w| self.pos[w as usize] != NONE)
                .collect()
        } else {
            self.cycle
                .iter()
                .copied()
                .filter(|&w| self.g.has_edge(v, w))
                .collect()
        };
        out.sort_unstable_by_key(|&w| self.pos[w as usize]);
        out
    }

    /// Branch with few vertices attached to the cycle: extension through
    /// `B` via round-2 cross edges, the `A'` escape, or the dense route.
    fn small_a(&mut self, c: f64, diag: &mut PathDiagnostics) -> (PathTag, Option<Vec<VertexId>>) {
        let k = self.k as f64;
        let cross: u64 = self.b.iter().map(|&v| self.on_cycle[v as usize] as u64).sum();
        diag.cross_edges = Some(cross);
        if cross as f64 >= 4.0 * k * log_k(self.k) {
            return (PathTag::SprinkleCase1, self.extend_through_windows(diag));
        }
        diag.union_bound_holds =
            Some((self.a.len() + self.cycle.len()) as f64 >= k - 5.0 * log_k(self.k));

        let n = self.g.vertex_count();
        let prefix_b = prefix_counts(&self.in_b);
        let high = k.powf(2.0 / 3.0);
        let b_degree: Vec<(VertexId, usize)> = self
            .a
            .iter()
            .map(|&v| (v, count_in(self.g, v, &self.in_b, &prefix_b)))
            .collect();
        let a_prime: Vec<VertexId> = b_degree
            .iter()
            .filter(|&&(_, d)| d as f64 >= high)
            .map(|&(v, _)| v)
            .collect();
        if a_prime.len() as f64 >= k.sqrt() {
            return (PathTag::SprinkleCase2, self.escape_through(&a_prime, diag));
        }

        let mut keep = vec![false; n];
        for &v in self.a.iter().chain(&self.cycle) {
            keep[v as usize] = true;
        }
        for &(v, d) in &b_degree {
            if d as f64 >= high {
                keep[v as usize] = false;
            }
        }
        for &v in &self.cycle {
            if count_in(self.g, v, &self.in_b, &prefix_b) as f64 >= high {
                keep[v as usize] = false;
            }
        }
        let z: Vec<VertexId> = (0..n as VertexId).filter(|&v| keep[v as usize]).collect();
        diag.dense_set = Some(z.len());
        diag.stage = "dense-route-on-z".into();
        let cycle = cycle_on(self.g, &z, self.coins[1], self.k, c / 3.0, diag);
        diag.cycle_length = Some(self.cycle.len());
        let found = (cycle.len() >= 3).then_some(cycle);
        (PathTag::PseudoCliqueRoute, found)
    }

    /// Cross edges ordered by their `B` endpoint, `ceil(2 log k)` windows of
    /// `k` edges with gaps of `k`, one round-2 edge per window, then a
    /// round-3 DFS inside `B` rooted at the hit `B` endpoints.
    fn extend_through_windows(&mut self, diag: &mut PathDiagnostics) -> Option<Vec<VertexId>> {
        let n = self.g.vertex_count();
        let k = self.k;
        let windows = (2.0 * log_k(k)).ceil() as usize;
        let mut round2 = PercolationOracle::new(self.coins[1], n);
        let mut hits: Vec<(VertexId, VertexId)> = Vec::new();
        let mut rank = 0usize;
        let mut bi = 0usize;
        for i in 1..=windows {
            let (lo, hi) = ((2 * i - 2) * k, (2 * i - 1) * k);
            let mut found = None;
            while bi < self.b.len() && found.is_none() {
                let b = self.b[bi];
                let deg = self.on_cycle[b as usize] as usize;
                if rank + deg <= lo {
                    rank += deg;
                    bi += 1;
                    continue;
                }
                if rank >= hi {
                    break;
                }
                for (j, x) in self.cycle_neighbors(b).into_iter().enumerate() {
                    let r = rank + j;
                    if r < lo {
                        continue;
                    }
                    if r >= hi {
                        break;
                    }
                    if round2.peek(EdgeKey::new(b, x)) {
                        found = Some((b, x));
                        break;
                    }
                }
                rank += deg;
                bi += 1;
            }
            if let Some(hit) = found {
                hits.push(hit);
            }
        }
        diag.window_hits = Some(hits.len());
        diag.reveals += round2.counters().reveals;
        if hits.is_empty() {
            diag.stage = "case1-no-window-hit".into();
            return None;
        }
        let starts: Vec<VertexId> = hits.iter().map(|&(b, _)| b).collect();
        let (tail, queries) = self.dfs_in_b(&starts)?;
        diag.queries += queries;
        let s = tail[0];
        let x = hits.iter().find(|&&(b, _)| b == s).unwrap().1;
        let mut path = open_at(&self.cycle, self.pos[x as usize] as usize);
        path.extend(tail);
        diag.stage = "case1-extended".into();
        Some(path)
    }

    /// Round-2 attachment of `A'` to the cycle and of `B` to the attached
    /// vertices, then a round-3 DFS inside `B`.
    fn escape_through(&mut self, a_prime: &[VertexId], diag: &mut PathDiagnostics) -> Option<Vec<VertexId>> {
        let n = self.g.vertex_count();
        let mut round2 = PercolationOracle::new(self.coins[1], n);
        let mut attach = vec![NONE; n];
        let mut attached = 0usize;
        for &a in a_prime {
            for x in self.cycle_neighbors(a) {
                if round2.peek(EdgeKey::new(a, x)) {
                    attach[a as usize] = x;
                    attached += 1;
                    break;
                }
            }
        }
        diag.attach_rate = Some(attached as f64 / a_prime.len() as f64);
        let want = log_k(self.k).ceil().max(1.0) as usize;
        let mut used = vec![false; n];
        let mut links: Vec<(VertexId, VertexId)> = Vec::new();
        for &b in &self.b {
            if links.len() >= want {
                break;
            }
            let candidates: Vec<VertexId> = self
                .g
                .neighbors(b)
                .filter(|&a| attach[a as usize] != NONE && !used[a as usize])
                .collect();
            for a in candidates {
                if round2.peek(EdgeKey::new(b, a)) {
                    used[a as usize] = true;
                    links.push((b, a));
                    break;
                }
            }
        }
        diag.window_hits = Some(links.len());
        diag.reveals += round2.counters().reveals;
        if links.is_empty() {
            diag.stage = "case2-no-link".into();
            return None;
        }
        let starts: Vec<VertexId> = links.iter().map(|&(b, _)| b).collect();
        let (tail, queries) = self.dfs_in_b(&starts)?;
        diag.queries += queries;
        let a = links.iter().find(|&&(b, _)| b == tail[0]).unwrap().1;
        let x = attach[a as usize];
        let mut path = open_at(&self.cycle, self.pos[x as usize] as usize);
        path.push(a);
        path.extend(tail);
        diag.stage = "case2-extended".into();
        Some(path)
    }

    /// Longest root path of a round-3 DFS of `G[B]` whose root is one of
    /// `starts`, and the number of queries made.
    fn dfs_in_b(&self, starts: &[VertexId]) -> Option<(Vec<VertexId>, u64)> {
        let n = self.g.vertex_count();
        let mut round3 = PercolationOracle::new(self.coins[2], n);
        let mut dfs = DfsExplorer::restricted(self.g, &self.b, RootPolicy::Priority(starts.to_vec()), false);
        dfs.run(&mut round3, StopCondition::None);
        let queries = dfs.queries();
        let forest = dfs.forest();
        let mut is_start = vec![false; n];
        for &s in starts {
            is_start[s as usize] = true;
        }
        let best = forest
            .order()
            .iter()
            .copied()
            .filter(|&v| forest.root(v).is_some_and(|r| is_start[r as usize]))
            .max_by_key(|&v| (forest.depth(v), std::cmp::Reverse(v)))?;
        Some((forest.root_path(best), queries))
    }

    /// Branch with many vertices attached to the cycle: a round-2 path in a
    /// balanced bipartite graph between `A_1` and one cycle segment, joined
    /// to the segment's ends by round-3 edges.
    fn large_a(&mut self, diag: &mut PathDiagnostics) -> Option<Vec<VertexId>> {
        let g = self.g;
        let n = g.vertex_count();
        let kf = self.k as f64;
        let eps = self.eps;
        let m = self.cycle.len();
        let a1_len = ((10.0 * eps * kf).ceil() as usize).clamp(1, self.a.len());
        let a1: Vec<VertexId> = self.a[..a1_len].to_vec();
        let seg = a1_len.min(m).max(1);

        let segments = m.div_ceil(seg);
        let mut weight = vec![0u64; segments];
        for &a in &a1 {
            for x in self.cycle_neighbors(a) {
                weight[self.pos[x as usize] as usize / seg] += 1;
            }
        }
        let best = (0..segments).max_by_key(|&j| (weight[j], std::cmp::Reverse(j)))?;
        let s1: Vec<usize> = (best * seg..((best + 1) * seg).min(m)).collect();

        let mut in_s1 = vec![false; n];
        for &i in &s1 {
            in_s1[self.cycle[i] as usize] = true;
        }
        let mut in_a1 = vec![false; n];
        for &a in &a1 {
            in_a1[a as usize] = true;
        }
        let mut deg_h = vec![0usize; n];
        for &a in &a1 {
            for x in self.cycle_neighbors(a) {
                if in_s1[x as usize] {
                    deg_h[a as usize] += 1;
                    deg_h[x as usize] += 1;
                }
            }
        }
        let cap = 100.0 * eps.powf(1.5) * kf;
        let keep_a: Vec<VertexId> = a1
            .iter()
            .copied()
            .filter(|&a| ((s1.len() - deg_h[a as usize]) as f64) < cap)
            .collect();
        let edge_len = ((eps * kf).ceil() as usize).max(1);
        if s1.len() <= 2 * edge_len {
            diag.stage = "case3-segment-too-short".into();
            return None;
        }
        let left = &s1[..edge_len];
        let right = &s1[s1.len() - edge_len..];
        let mid: Vec<VertexId> = s1[edge_len..s1.len() - edge_len]
            .iter()
            .map(|&i| self.cycle[i])
            .filter(|&x| ((a1.len() - deg_h[x as usize]) as f64) < cap)
            .collect();
        let side = keep_a.len().min(mid.len());
        diag.h_sizes = Some([side, side]);
        if side == 0 {
            diag.stage = "case3-empty-bipartite".into();
            return None;
        }
        let labels: Vec<VertexId> = keep_a[..side].iter().chain(&mid[..side]).copied().collect();
        let mut edges = Vec::new();
        for i in 0..side {
            for j in 0..side {
                if g.has_edge(labels[i], labels[side + j]) {
                    edges.push(EdgeKey::new(i as VertexId, (side + j) as VertexId));
                }
            }
        }
        let h = ExplicitGraph::from_edges(2 * side, &edges).ok()?;
        let mut round2 = PercolationOracle::relabeled(self.coins[1], labels.clone());
        let (local, queries, _) = deep_path(&h, &mut round2, self.k);
        diag.queries += queries;
        diag.reveals += round2.counters().reveals;
        let p: Vec<VertexId> = local.iter().map(|&v| labels[v as usize]).collect();
        diag.bipartite_path = Some(p.len().saturating_sub(1));
        if p.len() < 2 {
            diag.stage = "case3-short-bipartite-path".into();
            return None;
        }

        let mut round3 = PercolationOracle::new(self.coins[2], n);
        let head = edge_len.min(p.len() / 2);
        let e1 = (0..head).filter(|&i| in_a1[p[i] as usize]).find_map(|i| {
            left.iter()
                .map(|&li| self.cycle[li])
                .find(|&l| g.has_edge(l, p[i]) && round3.peek(EdgeKey::new(l, p[i])))
                .map(|l| (i, l))
        });
        let Some((i1, l)) = e1 else {
            diag.reveals += round3.counters().reveals;
            diag.stage = "case3-no-e1".into();
            return None;
        };
        let e2 = (p.len() - head..p.len())
            .rev()
            .filter(|&i| i > i1 && in_a1[p[i] as usize])
            .find_map(|i| {
                right
                    .iter()
                    .map(|&ri| self.cycle[ri])
                    .find(|&r| g.has_edge(r, p[i]) && round3.peek(EdgeKey::new(r, p[i])))
                    .map(|r| (i, r))
            });
        diag.reveals += round3.counters().reveals;
        let Some((i2, r)) = e2 else {
            diag.stage = "case3-no-e2".into();
            return None;
        };
        let (lp, rp) = (self.pos[l as usize] as usize, self.pos[r as usize] as usize);
        let mut spliced: Vec<VertexId> = Vec::with_capacity(m + i2 - i1 + 1);
        let mut i = rp;
        loop {
            spliced.push(self.cycle[i]);
            if i == lp {
                break;
            }
            i = (i + 1) % m;
        }
        spliced.extend_from_slice(&p[i1..=i2]);
        diag.stage = "case3-spliced".into();
        Some(spliced)
    }
}

/// `prefix[x]` = number of marked ids below `x`.
fn prefix_counts(mask: &[bool]) -> Vec<u32> {
    let mut prefix = Vec::with_capacity(mask.len() + 1);
    prefix.push(0);
    let mut acc = 0u32;
    for &m in mask {
        acc += m as u32;
        prefix.push(acc);
    }
    prefix
}

/// Number of host neighbors of `v` in the marked set.
fn count_in<G: GraphView + ?Sized>(g: &G, v: VertexId, mask: &[bool], prefix: &[u32]) -> usize {
    match g.adjacency(v) {
        Adjacency::List(list) => list.iter().filter(|&&w| mask[w as usize]).count(),
        Adjacency::Span {
            span,
            center,
            missing,
        } => {
            let mut d = (prefix[span.end as usize] - prefix[span.start as usize]) as usize;
            if span.contains(&center) && mask[center as usize] {
                d -= 1;
            }
            d - missing
                .iter()
                .filter(|&&w| span.contains(&w) && mask[w as usize])
                .count()
        }
    }
}
