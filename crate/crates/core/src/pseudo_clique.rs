//! Vertex classes of a percolated pseudo-clique.
//!
//! `S` holds the vertices of degree at most `c/10` in `G_p`, `W` the small
//! vertices close to another small vertex or on a short cycle, `X` the
//! closure of vertices with two neighbors in `S` or `X`, `Y` the degree-2
//! vertices next to `X`, and `A` what is left of the 2-core after removing
//! `W`, `X` and `Y`. Checkers compare the class sizes and the expansion
//! properties of `G_p` against their stated bounds.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{ExplicitGraph, GraphView, VertexId};
use crate::log_k;
use crate::percolation::{materialize, EdgeCoin};

/// Small-degree mask: `deg_{G_p}(v) <= c/10`.
pub fn degree_classes(gp: &ExplicitGraph, c: f64) -> Vec<bool> {
    (0..gp.vertex_count() as VertexId)
        .map(|v| gp.degree(v) as f64 <= c / 10.0)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSets {
    /// `w[i-1]` is `W_i`.
    pub w: [Vec<bool>; 4],
    pub union: Vec<bool>,
}

/// `W_i`: small vertices joined to another small vertex by a path with `i`
/// edges, or lying on a cycle of length `i`.
pub fn compute_w(gp: &ExplicitGraph, small: &[bool]) -> WSets {
    let n = gp.vertex_count();
    let mut w: [Vec<bool>; 4] = std::array::from_fn(|_| vec![false; n]);
    for v in 0..n as VertexId {
        if !small[v as usize] {
            continue;
        }
        let mut found = [false; 4];
        let mut path = vec![v];
        walk(gp, small, &mut path, &mut found);
        for i in 0..4 {
            w[i][v as usize] = found[i];
        }
    }
    let union = (0..n).map(|v| w.iter().any(|s| s[v])).collect();
    WSets { w, union }
}

fn walk(gp: &ExplicitGraph, small: &[bool], path: &mut Vec<VertexId>, found: &mut [bool; 4]) {
    if found.iter().all(|&f| f) {
        return;
    }
    let v = path[0];
    let x = *path.last().unwrap();
    let d = path.len() - 1;
    if d >= 1 && small[x as usize] {
        found[d - 1] = true;
    }
    if (2..4).contains(&d) && gp.neighbor_slice(x).binary_search(&v).is_ok() {
        found[d] = true;
    }
    if d == 4 {
        return;
    }
    for &y in gp.neighbor_slice(x) {
        if !path.contains(&y) {
            path.push(y);
            walk(gp, small, path, found);
            path.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XSets {
    pub x: Vec<bool>,
    /// Vertices added in each round.
    pub trace: Vec<usize>,
}

/// Iterates `X_i = {v : |N(v) ∩ (S ∪ X_1 ∪ ... ∪ X_{i-1})| >= 2}` in
/// synchronous rounds until nothing is added.
pub fn compute_x(gp: &ExplicitGraph, small: &[bool]) -> XSets {
    let n = gp.vertex_count();
    let mut in_t = small.to_vec();
    let mut count = vec![0u32; n];
    for v in 0..n as VertexId {
        if in_t[v as usize] {
            for &w in gp.neighbor_slice(v) {
                count[w as usize] += 1;
            }
        }
    }
    let mut x = vec![false; n];
    let mut trace = Vec::new();
    let mut candidates: Vec<VertexId> = (0..n as VertexId).collect();
    loop {
        let mut added: Vec<VertexId> = candidates
            .iter()
            .copied()
            .filter(|&v| !x[v as usize] && count[v as usize] >= 2)
            .collect();
        added.sort_unstable();
        added.dedup();
        if added.is_empty() {
            break;
        }
        trace.push(added.len());
        candidates.clear();
        for &v in &added {
            x[v as usize] = true;
        }
        for &v in &added {
            if !in_t[v as usize] {
                in_t[v as usize] = true;
                for &w in gp.neighbor_slice(v) {
                    count[w as usize] += 1;
                    candidates.push(w);
                }
            }
        }
    }
    XSets { x, trace }
}

/// The 2-core: repeatedly deletes vertices of degree at most 1.
pub fn two_core(gp: &ExplicitGraph) -> Vec<bool> {
    let n = gp.vertex_count();
    let mut deg: Vec<usize> = (0..n as VertexId).map(|v| gp.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: Vec<VertexId> = (0..n as VertexId).filter(|&v| deg[v as usize] <= 1).collect();
    while let Some(v) = queue.pop() {
        if !alive[v as usize] {
            continue;
        }
        alive[v as usize] = false;
        for &w in gp.neighbor_slice(v) {
            let wi = w as usize;
            if alive[wi] {
                deg[wi] -= 1;
                if deg[wi] == 1 {
                    queue.push(w);
                }
            }
        }
    }
    alive
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASets {
    pub y: Vec<bool>,
    pub v2: Vec<bool>,
    pub a: Vec<bool>,
}

/// `Y`: degree-2 vertices of `G_p` with a neighbor in `X`;
/// `A = V_2 \ (W ∪ X ∪ Y)`.
pub fn compute_a(gp: &ExplicitGraph, w: &[bool], x: &[bool]) -> ASets {
    let n = gp.vertex_count();
    let y: Vec<bool> = (0..n as VertexId)
        .map(|v| gp.degree(v) == 2 && gp.neighbor_slice(v).iter().any(|&u| x[u as usize]))
        .collect();
    let v2 = two_core(gp);
    let a = (0..n).map(|v| v2[v] && !w[v] && !x[v] && !y[v]).collect();
    ASets { y, v2, a }
}

/// Outcome of one bound check. `measured` is compared against `bound`;
/// for the expansion items it is the smallest margin found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemVerdict {
    pub holds: bool,
    pub measured: f64,
    pub bound: f64,
    pub sampled: bool,
    /// Number of sets examined.
    pub checked: usize,
}

impl ItemVerdict {
    fn at_most(measured: f64, bound: f64) -> Self {
        ItemVerdict {
            holds: measured <= bound,
            measured,
            bound,
            sampled: false,
            checked: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeVerdicts {
    pub a: ItemVerdict,
    pub b: ItemVerdict,
    pub c: ItemVerdict,
    pub d: ItemVerdict,
    pub e: ItemVerdict,
    pub f: ItemVerdict,
}

impl DegreeVerdicts {
    pub fn all_hold(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
            .iter()
            .all(|v| v.holds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeParams {
    pub k: usize,
    pub gamma: f64,
    pub c: f64,
    pub ell: usize,
    /// Random sets per size bucket for items (e) and (f).
    pub samples: usize,
    pub seed: u64,
}

/// Largest vertex count for which (e) and (f) enumerate every set.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Items (a)-(d) exactly; (e) and (f) over every qualifying set when
/// `n <= 20`, otherwise over all singletons (for (e)) plus `samples` random
/// sets per power-of-two size bucket.
pub fn check_degree_claims(gp: &ExplicitGraph, small: &[bool], w: &[bool], params: &DegreeParams) -> DegreeVerdicts {
    let n = gp.vertex_count();
    let kf = params.k as f64;
    let c = params.c;
    let ell = params.ell.max(1) as f64;

    let low = (0..n as VertexId)
        .filter(|&v| gp.degree(v) as f64 <= c / 10.0 + 1.0)
        .count();
    let a = ItemVerdict::at_most(low as f64, (1.0 + params.gamma) * kf * (-2.0 * c / 3.0).exp());

    let s_count = small.iter().filter(|&&s| s).count();
    let meeting = crate::graph::edges(gp)
        .filter(|e| small[e.u as usize] || small[e.v as usize])
        .count();
    let b = ItemVerdict::at_most(meeting as f64, 4.0 * c * s_count as f64);

    let max_deg = gp.max_degree();
    let cc = ItemVerdict::at_most(max_deg as f64, 4.0 * log_k(params.k));

    let w_count = w.iter().filter(|&&x| x).count();
    let d = ItemVerdict::at_most(w_count as f64, c.powi(4) * (-4.0 * c / 3.0).exp() * kf);

    let large: Vec<VertexId> = (0..n as VertexId).filter(|&v| !small[v as usize]).collect();
    let e_max = (kf / (2.0 * ell)).floor() as usize;
    let f_min = (kf / (2.0 * ell)).ceil().max(1.0) as usize;
    let f_max = (kf / 2.0).floor() as usize;
    let expand = |z: &[VertexId], mark: &mut Vec<u32>, stamp: u32| -> f64 {
        for &v in z {
            mark[v as usize] = stamp;
        }
        let mut outside = 0usize;
        for &v in z {
            for &u in gp.neighbor_slice(v) {
                if mark[u as usize] != stamp && mark[u as usize] != stamp + 1 {
                    mark[u as usize] = stamp + 1;
                    outside += 1;
                }
            }
        }
        outside as f64 - ell * z.len() as f64
    };
    let dense = |z: &[VertexId], mark: &mut Vec<u32>, stamp: u32| -> f64 {
        for &v in z {
            mark[v as usize] = stamp;
        }
        let twice: usize = z
            .iter()
            .map(|&v| {
                gp.neighbor_slice(v)
                    .iter()
                    .filter(|&&u| mark[u as usize] == stamp)
                    .count()
            })
            .sum();
        (twice / 2) as f64 - c * z.len() as f64 / (3.0 * ell)
    };

    let mut mark = vec![0u32; n];
    let mut stamp = 0u32;
    let mut next_stamp = || {
        stamp += 2;
        stamp
    };
    let mut e_sets = SetScan::default();
    let mut f_sets = SetScan::default();
    if n <= EXHAUSTIVE_LIMIT {
        for bits in 1u32..(1u32 << n) {
            let z: Vec<VertexId> = (0..n as VertexId).filter(|&v| bits >> v & 1 == 1).collect();
            let size = z.len();
            if size <= e_max && z.iter().all(|&v| !small[v as usize]) {
                e_sets.add(expand(&z, &mut mark, next_stamp()));
            }
            if size >= f_min && size <= f_max {
                f_sets.add(dense(&z, &mut mark, next_stamp()));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        if e_max >= 1 {
            for &v in &large {
                e_sets.add(expand(&[v], &mut mark, next_stamp()));
            }
        }
        let all: Vec<VertexId> = (0..n as VertexId).collect();
        for size in buckets(2, e_max.min(large.len())) {
            for i in 0..params.samples {
                let z = sample_set(gp, &large, small, size, i % 2 == 1, &mut rng);
                e_sets.add(expand(&z, &mut mark, next_stamp()));
            }
        }
        for size in buckets(f_min, f_max.min(n)) {
            for i in 0..params.samples {
                let z = sample_set(gp, &all, &[false; 0], size, i % 2 == 1, &mut rng);
                f_sets.add(dense(&z, &mut mark, next_stamp()));
            }
        }
    }
    let sampled = n > EXHAUSTIVE_LIMIT;
    DegreeVerdicts {
        a,
        b,
        c: cc,
        d,
        e: e_sets.verdict(sampled),
        f: f_sets.verdict(sampled),
    }
}

#[derive(Default)]
struct SetScan {
    min_margin: Option<f64>,
    checked: usize,
}

impl SetScan {
    fn add(&mut self, margin: f64) {
        self.checked += 1;
        self.min_margin = Some(self.min_margin.map_or(margin, |m| m.min(margin)));
    }

    fn verdict(&self, sampled: bool) -> ItemVerdict {
        let measured = self.min_margin.unwrap_or(0.0);
        ItemVerdict {
            holds: measured >= 0.0,
            measured,
            bound: 0.0,
            sampled,
            checked: self.checked,
        }
    }
}

/// Sizes `lo, 2lo, 4lo, ...` below `hi`, then `hi` itself.
fn buckets(lo: usize, hi: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if lo == 0 || lo > hi {
        return out;
    }
    let mut s = lo;
    while s < hi {
        out.push(s);
        s *= 2;
    }
    out.push(hi);
    out
}

/// A random `size`-subset of `pool`: uniform, or grown from a random start
/// through `G_p` neighbors inside the pool when `local`.
fn sample_set(
    gp: &ExplicitGraph,
    pool: &[VertexId],
    excluded: &[bool],
    size: usize,
    local: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<VertexId> {
    if !local {
        return pool.choose_multiple(rng, size).copied().collect();
    }
    let n = gp.vertex_count();
    let allowed = |v: VertexId| excluded.get(v as usize).is_none_or(|&x| !x);
    let mut inside = vec![false; n];
    let mut z = Vec::with_capacity(size);
    let mut frontier = Vec::new();
    while z.len() < size {
        let v = if frontier.is_empty() {
            pool[rng.gen_range(0..pool.len())]
        } else {
            frontier.swap_remove(rng.gen_range(0..frontier.len()))
        };
        if inside[v as usize] || !allowed(v) {
            continue;
        }
        inside[v as usize] = true;
        z.push(v);
        frontier.extend(
            gp.neighbor_slice(v)
                .iter()
                .copied()
                .filter(|&u| !inside[u as usize] && allowed(u)),
        );
    }
    z
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PseudoCliqueReport {
    pub k: usize,
    pub n: usize,
    pub gamma: f64,
    pub c: f64,
    pub ell: usize,
    pub s: usize,
    pub l: usize,
    pub w_i: [usize; 4],
    pub w: usize,
    pub x_trace: Vec<usize>,
    pub x: usize,
    pub y: usize,
    pub v2: usize,
    pub a: usize,
    pub max_degree: usize,
    /// `500 c^4 e^{-4c/3} k`.
    pub x_cap: f64,
    /// `(1 - 2c e^{-c}) k`.
    pub a_target: f64,
    pub degree_claims: DegreeVerdicts,
}

impl PseudoCliqueReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PseudoOptions {
    pub ell: usize,
    pub samples: usize,
    pub max_edges: u64,
}

impl Default for PseudoOptions {
    fn default() -> Self {
        PseudoOptions {
            ell: 7,
            samples: 10_000,
            max_edges: 100_000_000,
        }
    }
}

/// All classes and checks for an already materialized `G_p`.
pub fn report(gp: &ExplicitGraph, k: usize, gamma: f64, c: f64, seed: u64, opts: &PseudoOptions) -> PseudoCliqueReport {
    let n = gp.vertex_count();
    let small = degree_classes(gp, c);
    let ws = compute_w(gp, &small);
    let xs = compute_x(gp, &small);
    let sets = compute_a(gp, &ws.union, &xs.x);
    let count = |m: &[bool]| m.iter().filter(|&&b| b).count();
    let s = count(&small);
    let params = DegreeParams {
        k,
        gamma,
        c,
        ell: opts.ell,
        samples: opts.samples,
        seed,
    };
    let kf = k as f64;
    PseudoCliqueReport {
        k,
        n,
        gamma,
        c,
        ell: opts.ell,
        s,
        l: n - s,
        w_i: std::array::from_fn(|i| count(&ws.w[i])),
        w: count(&ws.union),
        x: count(&xs.x),
        x_trace: xs.trace,
        y: count(&sets.y),
        v2: count(&sets.v2),
        a: count(&sets.a),
        max_degree: gp.max_degree(),
        x_cap: 500.0 * c.powi(4) * (-4.0 * c / 3.0).exp() * kf,
        a_target: (1.0 - 2.0 * c * (-c).exp()) * kf,
        degree_claims: check_degree_claims(gp, &small, &ws.union, &params),
    }
}

/// Materializes `G_{c/k}` of `g` with a round-0 coin and reports on it.
pub fn analyze<G: GraphView + ?Sized>(
    g: &G,
    k: usize,
    gamma: f64,
    c: f64,
    seed: u64,
    opts: &PseudoOptions,
) -> Result<PseudoCliqueReport> {
    let coin = EdgeCoin::new(crate::edge_probability(c, k), seed, 0)?;
    let gp = materialize(&coin, g, opts.max_edges)?;
    Ok(report(&gp, k, gamma, c, seed, opts))
}
