use serde::Serialize;

use crate::graph::{VertexId, NONE};

/// The DFS forest on the discovered vertices.
///
/// Discovery order is a preorder, so the subtree of `v` occupies the
/// contiguous range `euler_in(v) ..= euler_out(v)` of [`order`](Self::order).
/// Vertices the run never reached have no parent, no root and no interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootedForest {
    parent: Vec<VertexId>,
    depth: Vec<u32>,
    root: Vec<VertexId>,
    order: Vec<VertexId>,
    euler_in: Vec<u32>,
    size: Vec<u32>,
}

impl RootedForest {
    /// `order` lists discovered vertices in discovery order; `parent[v]` is
    /// `NONE` for roots and undiscovered vertices.
    pub fn from_discovery(parent: Vec<VertexId>, order: Vec<VertexId>) -> Self {
        let n = parent.len();
        let mut depth = vec![0u32; n];
        let mut root = vec![NONE; n];
        let mut euler_in = vec![NONE; n];
        let mut size = vec![0u32; n];
        for (i, &v) in order.iter().enumerate() {
            let vi = v as usize;
            euler_in[vi] = i as u32;
            size[vi] = 1;
            let p = parent[vi];
            if p == NONE {
                root[vi] = v;
            } else {
                debug_assert!(euler_in[p as usize] != NONE, "parent discovered first");
                depth[vi] = depth[p as usize] + 1;
                root[vi] = root[p as usize];
            }
        }
        for &v in order.iter().rev() {
            let p = parent[v as usize];
            if p != NONE {
                size[p as usize] += size[v as usize];
            }
        }
        RootedForest {
            parent,
            depth,
            root,
            order,
            euler_in,
            size,
        }
    }

    /// Builds the forest of a parent array alone; children are discovered in
    /// increasing id order.
    pub fn from_parents(parent: Vec<VertexId>) -> Self {
        let n = parent.len();
        let mut child_count = vec![0usize; n + 1];
        for &p in &parent {
            if p != NONE {
                child_count[p as usize + 1] += 1;
            }
        }
        for i in 0..n {
            child_count[i + 1] += child_count[i];
        }
        let mut fill = child_count.clone();
        let mut children = vec![0 as VertexId; child_count[n]];
        for (v, &p) in parent.iter().enumerate() {
            if p != NONE {
                children[fill[p as usize]] = v as VertexId;
                fill[p as usize] += 1;
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut stack = Vec::new();
        for r in 0..n {
            if parent[r] != NONE {
                continue;
            }
            stack.push(r as VertexId);
            while let Some(v) = stack.pop() {
                order.push(v);
                let kids = &children[child_count[v as usize]..child_count[v as usize + 1]];
                stack.extend(kids.iter().rev());
            }
        }
        Self::from_discovery(parent, order)
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn discovered_count(&self) -> usize {
        self.order.len()
    }

    pub fn is_discovered(&self, v: VertexId) -> bool {
        self.euler_in[v as usize] != NONE
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        let p = self.parent[v as usize];
        (p != NONE).then_some(p)
    }

    pub fn parents(&self) -> &[VertexId] {
        &self.parent
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v as usize] as usize
    }

    pub fn root(&self, v: VertexId) -> Option<VertexId> {
        let r = self.root[v as usize];
        (r != NONE).then_some(r)
    }

    pub fn roots(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.order
            .iter()
            .copied()
            .filter(move |&v| self.parent[v as usize] == NONE)
    }

    /// Discovered vertices in discovery (pre)order.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn euler_in(&self, v: VertexId) -> usize {
        self.euler_in[v as usize] as usize
    }

    pub fn euler_out(&self, v: VertexId) -> usize {
        self.euler_in(v) + self.subtree_size(v) - 1
    }

    /// Number of vertices in the subtree of `v`, including `v`.
    pub fn subtree_size(&self, v: VertexId) -> usize {
        self.size[v as usize] as usize
    }

    /// True when `u` is `v` or an ancestor of `v`.
    pub fn is_ancestor_or_self(&self, u: VertexId, v: VertexId) -> bool {
        if !self.is_discovered(u) || !self.is_discovered(v) {
            return false;
        }
        let (a, b) = (self.euler_in(u), self.euler_in(v));
        a <= b && b <= self.euler_out(u)
    }

    /// True when one endpoint is a strict ancestor of the other.
    pub fn is_vertical(&self, u: VertexId, v: VertexId) -> bool {
        u != v && (self.is_ancestor_or_self(u, v) || self.is_ancestor_or_self(v, u))
    }

    /// Vertices from the root of `v` down to `v`.
    pub fn root_path(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = Vec::with_capacity(self.depth(v) + 1);
        let mut x = v;
        loop {
            path.push(x);
            match self.parent(x) {
                Some(p) => x = p,
                None => break,
            }
        }
        path.reverse();
        path
    }

    /// A deepest discovered vertex, the lowest discovery index among ties.
    pub fn deepest(&self) -> Option<VertexId> {
        let mut best: Option<VertexId> = None;
        for &v in &self.order {
            if best.is_none_or(|b| self.depth[v as usize] > self.depth[b as usize]) {
                best = Some(v);
            }
        }
        best
    }

    pub fn max_depth(&self) -> usize {
        self.deepest().map_or(0, |v| self.depth(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_star() {
        // 0 - 1 - 2 and a separate star 3 with leaves 4, 5.
        let f = RootedForest::from_parents(vec![NONE, 0, 1, NONE, 3, 3]);
        assert_eq!(f.roots().collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(f.depth(2), 2);
        assert_eq!(f.subtree_size(0), 3);
        assert_eq!(f.euler_out(0), 2);
        assert_eq!(f.root_path(2), vec![0, 1, 2]);
        assert!(f.is_vertical(0, 2));
        assert!(!f.is_vertical(4, 5));
        assert_eq!(f.root(5), Some(3));
        assert_eq!(f.order(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(f.deepest(), Some(2));
    }

    #[test]
    fn undiscovered_vertices() {
        let f = RootedForest::from_discovery(vec![NONE, NONE, 1], vec![1, 2]);
        assert!(!f.is_discovered(0));
        assert_eq!(f.discovered_count(), 2);
        assert_eq!(f.root(0), None);
        assert!(!f.is_vertical(0, 2));
    }
}
