use std::io::Write;

use serde::Serialize;

use super::{desc_within_batch, heights, LevelIndex};
use crate::dfs::RootedForest;
use crate::error::Result;
use crate::graph::{EdgeKey, GraphView, VertexId};
use crate::percolation::PercolationOracle;

/// Distance window `(1-5eps)k` used by the skinny test, floored at 0.
pub fn skinny_window(eps: f64, k: usize) -> usize {
    ((1.0 - 5.0 * eps) * k as f64).floor().max(0.0) as usize
}

/// Integer distance range `[eps*k, (1-5eps)k]` of `B(v)`; empty when
/// `eps >= 1/6`.
pub fn back_edge_range(eps: f64, k: usize) -> (usize, usize) {
    let kf = k as f64;
    let lo = (eps * kf).ceil().max(1.0) as usize;
    let hi = ((1.0 - 5.0 * eps) * kf).floor().max(0.0) as usize;
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexClassification {
    pub epsilon: f64,
    pub k: usize,
    pub free: Vec<bool>,
    pub up: Vec<bool>,
    pub skinny: Vec<bool>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub free: usize,
    pub up: usize,
    pub down: usize,
    pub skinny: usize,
}

impl VertexClassification {
    pub fn is_down(&self, v: VertexId) -> bool {
        !self.up[v as usize]
    }

    pub fn counts(&self) -> ClassCounts {
        let count = |x: &[bool]| x.iter().filter(|&&b| b).count();
        let up = count(&self.up);
        ClassCounts {
            free: count(&self.free),
            up,
            down: self.up.len() - up,
            skinny: count(&self.skinny),
        }
    }
}

/// up: `|D(v)| >= eps k`; skinny: `|D_{<=(1-5eps)k}(v)| <= (1-4eps)k`;
/// free: at least `(1-eps)k` untested host edges at `v`.
pub fn classify<G: GraphView + ?Sized>(
    f: &RootedForest,
    oracle: &PercolationOracle,
    g: &G,
    eps: f64,
    k: usize,
) -> VertexClassification {
    let n = f.vertex_count();
    let kf = k as f64;
    let window = desc_within_batch(f, skinny_window(eps, k));
    let mut cls = VertexClassification {
        epsilon: eps,
        k,
        free: Vec::with_capacity(n),
        up: Vec::with_capacity(n),
        skinny: Vec::with_capacity(n),
    };
    for v in 0..n as VertexId {
        let descendants = f.subtree_size(v).saturating_sub(1);
        cls.up.push(descendants as f64 >= eps * kf);
        cls.skinny.push(window[v as usize] as f64 <= (1.0 - 4.0 * eps) * kf);
        cls.free
            .push(oracle.untested_incident(g, v) as f64 >= (1.0 - eps) * kf);
    }
    cls
}

/// `B(v)`: ancestors `u` with `uv` an untested host edge and
/// `eps k <= d(u, v) <= (1-5eps)k`, nearest first.
pub fn back_edge_set<G: GraphView + ?Sized>(
    levels: &LevelIndex<'_>,
    oracle: &PercolationOracle,
    g: &G,
    eps: f64,
    k: usize,
    v: VertexId,
) -> Vec<VertexId> {
    let f = levels.forest;
    let (lo, hi) = back_edge_range(eps, k);
    let hi = hi.min(f.depth(v));
    if !f.is_discovered(v) || lo > hi {
        return Vec::new();
    }
    let usable = |u: VertexId| !oracle.is_tested(EdgeKey::new(u, v));
    if g.degree(v) < hi - lo + 1 {
        let mut out: Vec<VertexId> = g
            .neighbors(v)
            .filter(|&u| {
                f.is_ancestor_or_self(u, v) && u != v && {
                    let d = f.depth(v) - f.depth(u);
                    (lo..=hi).contains(&d)
                }
            })
            .filter(|&u| usable(u))
            .collect();
        out.sort_by_key(|&u| std::cmp::Reverse(f.depth(u)));
        out
    } else {
        (lo..=hi)
            .filter_map(|d| levels.ancestor_at(v, d))
            .filter(|&u| g.has_edge(u, v) && usable(u))
            .collect()
    }
}

pub fn back_edge_sets<G: GraphView + ?Sized>(
    f: &RootedForest,
    oracle: &PercolationOracle,
    g: &G,
    eps: f64,
    k: usize,
    targets: &[VertexId],
) -> Vec<Vec<VertexId>> {
    let levels = LevelIndex::new(f);
    targets
        .iter()
        .map(|&v| back_edge_set(&levels, oracle, g, eps, k, v))
        .collect()
}

/// CSV with header `vertex,depth,height,up,skinny,free`.
pub fn write_classification_csv<W: Write>(
    f: &RootedForest,
    cls: &VertexClassification,
    mut out: W,
) -> Result<()> {
    let h = heights(f);
    writeln!(out, "vertex,depth,height,up,skinny,free")?;
    for v in 0..f.vertex_count() {
        writeln!(
            out,
            "{v},{},{},{},{},{}",
            f.depth(v as VertexId),
            h[v],
            cls.up[v] as u8,
            cls.skinny[v] as u8,
            cls.free[v] as u8
        )?;
    }
    Ok(())
}
