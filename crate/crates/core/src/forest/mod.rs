//! Structural queries on a DFS forest: level ancestors, heights, bounded
//! descendant counts and the free/up/skinny classification with the
//! back-edge candidate sets `B(v)`.

mod classify;
mod fenwick;

pub use classify::{
    back_edge_range, back_edge_set, back_edge_sets, classify, skinny_window, write_classification_csv,
    ClassCounts, VertexClassification,
};

use crate::dfs::RootedForest;
use crate::graph::VertexId;
use fenwick::Fenwick;

/// Per-depth lists of vertices in preorder; answers `ancestor_at` by binary
/// search.
pub struct LevelIndex<'f> {
    forest: &'f RootedForest,
    levels: Vec<Vec<VertexId>>,
}

impl<'f> LevelIndex<'f> {
    pub fn new(forest: &'f RootedForest) -> Self {
        let mut levels: Vec<Vec<VertexId>> = vec![Vec::new(); forest.max_depth() + 1];
        for &v in forest.order() {
            levels[forest.depth(v)].push(v);
        }
        LevelIndex { forest, levels }
    }

    /// The ancestor of `v` at distance exactly `i`; `v` itself for `i = 0`.
    pub fn ancestor_at(&self, v: VertexId, i: usize) -> Option<VertexId> {
        let f = self.forest;
        if !f.is_discovered(v) || i > f.depth(v) {
            return None;
        }
        let level = &self.levels[f.depth(v) - i];
        let pos = level.partition_point(|&u| f.euler_in(u) <= f.euler_in(v));
        // The last vertex at that depth discovered no later than v is its ancestor.
        Some(level[pos - 1])
    }

    pub fn lca(&self, u: VertexId, v: VertexId) -> Option<VertexId> {
        let f = self.forest;
        if f.root(u)? != f.root(v)? {
            return None;
        }
        let (du, dv) = (f.depth(u), f.depth(v));
        let d = du.min(dv);
        let (a, b) = (self.ancestor_at(u, du - d)?, self.ancestor_at(v, dv - d)?);
        if a == b {
            return Some(a);
        }
        // Largest depth t < d at which the ancestors coincide.
        let (mut lo, mut hi) = (0usize, d);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.ancestor_at(a, d - mid) == self.ancestor_at(b, d - mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.ancestor_at(a, d - lo)
    }

    /// Number of forest edges between `u` and `v`, if they share a tree.
    pub fn distance(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let w = self.lca(u, v)?;
        let f = self.forest;
        Some(f.depth(u) + f.depth(v) - 2 * f.depth(w))
    }
}

/// `max{i : D_i(v) nonempty}` for every vertex; 0 for leaves and
/// undiscovered vertices.
pub fn heights(f: &RootedForest) -> Vec<u32> {
    let mut h = vec![0u32; f.vertex_count()];
    for &v in f.order().iter().rev() {
        if let Some(p) = f.parent(v) {
            h[p as usize] = h[p as usize].max(h[v as usize] + 1);
        }
    }
    h
}

pub fn height(f: &RootedForest, v: VertexId) -> usize {
    f.order()[f.euler_in(v)..=f.euler_out(v)]
        .iter()
        .map(|&w| f.depth(w) - f.depth(v))
        .max()
        .unwrap_or(0)
}

/// `|D_{<=d}(v)|` for every vertex (strict descendants within distance `d`).
pub fn desc_within_batch(f: &RootedForest, d: usize) -> Vec<u32> {
    let counts = marked_within_batch(f, d, None);
    counts
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.saturating_sub(f.is_discovered(v as VertexId) as u32))
        .collect()
}

/// For every vertex `v`, the number of marked vertices `w` in the subtree of
/// `v` (including `v`) with `depth(w) - depth(v) <= d`. `None` marks all.
///
/// Offline sweep: vertices enter a Fenwick tree over preorder positions in
/// increasing depth, and `v` is answered once every vertex of depth at most
/// `depth(v) + d` has entered.
pub fn marked_within_batch(f: &RootedForest, d: usize, marked: Option<&[bool]>) -> Vec<u32> {
    let n = f.vertex_count();
    let mut out = vec![0u32; n];
    let m = f.discovered_count();
    if m == 0 {
        return out;
    }
    let max_depth = f.max_depth();
    let mut by_depth: Vec<Vec<VertexId>> = vec![Vec::new(); max_depth + 1];
    for &v in f.order() {
        by_depth[f.depth(v)].push(v);
    }
    let mut tree = Fenwick::new(m);
    let mut inserted = 0usize;
    for t in 0..=max_depth {
        // Insert every vertex of depth <= t + d, then answer depth-t vertices.
        let limit = (t + d).min(max_depth);
        while inserted <= limit {
            for &w in &by_depth[inserted] {
                if marked.is_none_or(|mk| mk[w as usize]) {
                    tree.add(f.euler_in(w), 1);
                }
            }
            inserted += 1;
        }
        for &v in &by_depth[t] {
            out[v as usize] = tree.range_sum(f.euler_in(v), f.euler_out(v)) as u32;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NONE;

    fn sample() -> RootedForest {
        // 0 -> {1, 4}, 1 -> {2, 3}, 4 -> {5}, 5 -> {6}; 7 alone.
        RootedForest::from_parents(vec![NONE, 0, 1, 1, 0, 4, 5, NONE])
    }

    #[test]
    fn ancestors() {
        let f = sample();
        let idx = LevelIndex::new(&f);
        assert_eq!(idx.ancestor_at(6, 0), Some(6));
        assert_eq!(idx.ancestor_at(6, 3), Some(0));
        assert_eq!(idx.ancestor_at(3, 1), Some(1));
        assert_eq!(idx.ancestor_at(0, 1), None);
        assert_eq!(idx.lca(3, 6), Some(0));
        assert_eq!(idx.lca(2, 3), Some(1));
        assert_eq!(idx.distance(3, 6), Some(5));
        assert_eq!(idx.distance(2, 7), None);
    }

    #[test]
    fn heights_and_windows() {
        let f = sample();
        let h = heights(&f);
        assert_eq!(h, vec![3, 1, 0, 0, 2, 1, 0, 0]);
        assert_eq!(height(&f, 4), 2);
        assert_eq!(desc_within_batch(&f, 0), vec![0; 8]);
        assert_eq!(desc_within_batch(&f, 1), vec![2, 2, 0, 0, 1, 1, 0, 0]);
        assert_eq!(desc_within_batch(&f, 10), vec![6, 2, 0, 0, 2, 1, 0, 0]);
        let mut marked = vec![false; 8];
        marked[0] = true;
        marked[6] = true;
        assert_eq!(
            marked_within_batch(&f, 2, Some(&marked)),
            vec![1, 0, 0, 0, 1, 1, 1, 0]
        );
    }
}
