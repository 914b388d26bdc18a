use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Adjacency, EdgeKey, GraphView, VertexId};
use crate::error::{Error, Result};

/// A `k`-pseudo-clique: `K_n` with `n = floor((1+gamma)k)` minus a sparse set
/// of deleted edges, every vertex keeping degree at least `k`. Only the deleted
/// edges are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoClique {
    n: VertexId,
    k: usize,
    offsets: Vec<usize>,
    missing: Vec<VertexId>,
}

impl PseudoClique {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn missing(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.missing[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn deleted_edge_count(&self) -> usize {
        self.missing.len() / 2
    }
}

impl GraphView for PseudoClique {
    fn vertex_count(&self) -> usize {
        self.n as usize
    }
    fn degree(&self, v: VertexId) -> usize {
        self.n as usize - 1 - self.missing(v).len()
    }
    fn adjacency(&self, v: VertexId) -> Adjacency<'_> {
        Adjacency::Span {
            span: 0..self.n,
            center: v,
            missing: self.missing(v),
        }
    }
    fn edge_count(&self) -> u64 {
        let n = self.n as u64;
        n * (n - 1) / 2 - self.deleted_edge_count() as u64
    }
    fn is_cofinite(&self) -> bool {
        true
    }
}

/// Random `k`-pseudo-clique on `floor((1+gamma)k)` vertices.
///
/// Starting from `K_n`, edges are visited in a seed-determined uniformly random
/// order and deleted whenever both endpoints still have degree above `k`.
/// Only edges between vertices that still have slack can ever be deleted, so
/// the random order is realized lazily over that shrinking set.
pub fn gen_pseudo_clique(k: usize, gamma: f64, seed: u64) -> Result<PseudoClique> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must lie in (0, 1)")));
    }
    if k == 0 || (k as f64) * gamma < 1.0 - 1e-9 {
        return Err(Error::InvalidParameter(format!("need k >= 1/gamma, got k = {k}")));
    }
    let n = ((1.0 + gamma) * k as f64 + 1e-9).floor() as usize;
    if n >= VertexId::MAX as usize {
        return Err(Error::InvalidParameter("pseudo-clique too large".into()));
    }
    let slack0 = n - 1 - k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut state = Deletion::new(n, slack0);
    loop {
        let a = state.active.len();
        if a < 2 {
            break;
        }
        let pairs = a * (a - 1) / 2;
        let available = pairs - state.deleted_within;
        if available == 0 {
            break;
        }
        if a <= 64 || available * 4 < pairs {
            // Tail: shuffle the remaining candidate pairs and sweep them once.
            let mut rest: Vec<EdgeKey> = Vec::with_capacity(available);
            for i in 0..a {
                for j in i + 1..a {
                    let e = EdgeKey::new(state.active[i], state.active[j]);
                    if !state.deleted_set.contains(&e) {
                        rest.push(e);
                    }
                }
            }
            rest.sort_unstable();
            rest.shuffle(&mut rng);
            for e in rest {
                if state.slack[e.u as usize] > 0 && state.slack[e.v as usize] > 0 {
                    state.delete(e);
                }
            }
            break;
        }
        let i = rng.gen_range(0..a);
        let mut j = rng.gen_range(0..a - 1);
        if j >= i {
            j += 1;
        }
        let e = EdgeKey::new(state.active[i], state.active[j]);
        if !state.deleted_set.contains(&e) {
            state.delete(e);
        }
    }

    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut missing = Vec::with_capacity(2 * state.deleted_set.len());
    for mut row in state.deleted {
        row.sort_unstable();
        missing.extend_from_slice(&row);
        offsets.push(missing.len());
    }
    Ok(PseudoClique {
        n: n as VertexId,
        k,
        offsets,
        missing,
    })
}

struct Deletion {
    slack: Vec<usize>,
    deleted: Vec<Vec<VertexId>>,
    deleted_set: HashSet<EdgeKey>,
    /// Vertices that can still lose an edge; `pos` gives O(1) removal.
    active: Vec<VertexId>,
    pos: Vec<usize>,
    is_active: Vec<bool>,
    /// Deleted pairs with both endpoints active.
    deleted_within: usize,
}

impl Deletion {
    fn new(n: usize, slack0: usize) -> Self {
        let live = slack0 > 0;
        Deletion {
            slack: vec![slack0; n],
            deleted: vec![Vec::new(); n],
            deleted_set: HashSet::new(),
            active: if live { (0..n as VertexId).collect() } else { Vec::new() },
            pos: (0..n).collect(),
            is_active: vec![live; n],
            deleted_within: 0,
        }
    }

    fn delete(&mut self, e: EdgeKey) {
        self.deleted_set.insert(e);
        self.deleted[e.u as usize].push(e.v);
        self.deleted[e.v as usize].push(e.u);
        self.deleted_within += 1;
        for x in [e.u as usize, e.v as usize] {
            self.slack[x] -= 1;
            if self.slack[x] > 0 {
                continue;
            }
            self.is_active[x] = false;
            let p = self.pos[x];
            self.active.swap_remove(p);
            if p < self.active.len() {
                self.pos[self.active[p] as usize] = p;
            }
            let is_active = &self.is_active;
            self.deleted_within -= self.deleted[x]
                .iter()
                .filter(|&&w| is_active[w as usize])
                .count();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{min_degree, to_explicit};

    #[test]
    fn no_slack_gives_complete_graph() {
        let g = gen_pseudo_clique(20, 0.05, 3).unwrap();
        assert_eq!(g.vertex_count(), 21);
        assert_eq!(g.deleted_edge_count(), 0);
        assert_eq!(g.edge_count(), 210);
    }

    #[test]
    fn hundred() {
        let g = gen_pseudo_clique(100, 0.05, 11).unwrap();
        assert_eq!(g.vertex_count(), 105);
        assert!(min_degree(&g) >= 100);
        assert!(g.deleted_edge_count() > 0);
        let x = to_explicit(&g);
        assert_eq!(x.edge_count(), g.edge_count());
        for u in 0..105 {
            for v in 0..105 {
                assert_eq!(g.has_edge(u, v), x.has_edge(u, v));
            }
        }
    }

    #[test]
    fn deletion_is_maximal() {
        let g = gen_pseudo_clique(200, 0.1, 5).unwrap();
        let with_slack: Vec<VertexId> = (0..g.vertex_count() as VertexId)
            .filter(|&v| g.degree(v) > 200)
            .collect();
        for (i, &u) in with_slack.iter().enumerate() {
            for &v in &with_slack[i + 1..] {
                assert!(!g.has_edge(u, v), "edge {u}-{v} could still be deleted");
            }
        }
    }

    #[test]
    fn large_instance_keeps_degree() {
        let g = gen_pseudo_clique(10_000, 0.05, 1).unwrap();
        assert_eq!(g.vertex_count(), 10_500);
        assert!(min_degree(&g) >= 10_000);
        assert_eq!(g, gen_pseudo_clique(10_000, 0.05, 1).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gen_pseudo_clique(10, 0.05, 1).is_err());
        assert!(gen_pseudo_clique(100, 0.0, 1).is_err());
    }
}
