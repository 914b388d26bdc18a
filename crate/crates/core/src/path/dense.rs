use crate::graph::{GraphView, VertexId};
use crate::log_k;

/// Size window `[lo, hi]` and inner minimum degree for a dense vertex set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DenseWindow {
    pub lo: f64,
    pub hi: f64,
    pub min_inner_degree: f64,
}

/// `(1 - 1/log k)k <= |V'| <= (1 + 10 eps)k` with inner minimum degree
/// `(1 - 2/log k)k`.
pub fn dense_window(k: usize, eps: f64) -> DenseWindow {
    let kf = k as f64;
    let l = log_k(k);
    DenseWindow {
        lo: (1.0 - 1.0 / l) * kf,
        hi: (1.0 + 10.0 * eps) * kf,
        min_inner_degree: (1.0 - 2.0 / l) * kf,
    }
}

const SEEDS: usize = 16;

/// Searches for a vertex set in the dense window by core peeling: first of
/// the whole vertex set, then of the closed neighborhoods of a few evenly
/// spaced seed vertices. Returns the sorted set.
pub fn find_dense_set<G: GraphView + ?Sized>(g: &G, k: usize, eps: f64) -> Option<Vec<VertexId>> {
    let n = g.vertex_count();
    if n == 0 || k == 0 {
        return None;
    }
    let w = dense_window(k, eps);
    let need = w.min_inner_degree.ceil().max(0.0) as usize;
    let fits = |len: usize| len as f64 >= w.lo && len as f64 <= w.hi;
    let mut peeler = Peeler::new(n);

    let all: Vec<VertexId> = (0..n as VertexId).collect();
    let core = peeler.peel(g, &all, need);
    if fits(core.len()) {
        return Some(core);
    }
    let cap = (4.0 * w.hi).max(16.0) as usize;
    for i in 0..SEEDS.min(n) {
        let v = (i * n / SEEDS.min(n)) as VertexId;
        if g.degree(v) + 1 > cap || ((g.degree(v) + 1) as f64) < w.lo {
            continue;
        }
        let mut ball: Vec<VertexId> = g.neighbors(v).collect();
        ball.push(v);
        ball.sort_unstable();
        let core = peeler.peel(g, &ball, need);
        if fits(core.len()) {
            return Some(core);
        }
    }
    None
}

struct Peeler {
    inside: Vec<bool>,
    deg: Vec<u32>,
    queued: Vec<bool>,
}

impl Peeler {
    fn new(n: usize) -> Self {
        Peeler {
            inside: vec![false; n],
            deg: vec![0; n],
            queued: vec![false; n],
        }
    }

    /// Repeatedly removes members with fewer than `need` neighbors inside
    /// the current set; returns the survivors in ascending order.
    fn peel<G: GraphView + ?Sized>(&mut self, g: &G, set: &[VertexId], need: usize) -> Vec<VertexId> {
        let full = set.len() == g.vertex_count();
        for &v in set {
            self.inside[v as usize] = true;
        }
        let mut queue = Vec::new();
        for &v in set {
            let d = if full {
                g.degree(v)
            } else {
                self.inside_neighbors(g, v, set).len()
            };
            self.deg[v as usize] = d as u32;
            if d < need {
                self.queued[v as usize] = true;
                queue.push(v);
            }
        }
        while let Some(v) = queue.pop() {
            let around = self.inside_neighbors(g, v, set);
            self.inside[v as usize] = false;
            for w in around {
                let wi = w as usize;
                self.deg[wi] -= 1;
                if (self.deg[wi] as usize) < need && !self.queued[wi] {
                    self.queued[wi] = true;
                    queue.push(w);
                }
            }
        }
        let survivors: Vec<VertexId> = set.iter().copied().filter(|&v| self.inside[v as usize]).collect();
        for &v in set {
            self.inside[v as usize] = false;
            self.queued[v as usize] = false;
        }
        survivors
    }

    fn inside_neighbors<G: GraphView + ?Sized>(&self, g: &G, v: VertexId, set: &[VertexId]) -> Vec<VertexId> {
        if g.degree(v) <= set.len() {
            g.neighbors(v).filter(|&w| self.inside[w as usize]).collect()
        } else {
            set.iter()
                .copied()
                .filter(|&w| self.inside[w as usize] && g.has_edge(v, w))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CliqueChain, CompleteGraph, ExplicitGraph, EdgeKey};

    #[test]
    fn complete_graph_is_dense() {
        let g = CompleteGraph::new(200).unwrap();
        assert_eq!(find_dense_set(&g, 200, 0.1).unwrap().len(), 201);
    }

    #[test]
    fn clique_chain_yields_one_clique() {
        let g = CliqueChain::new(100, 20).unwrap();
        let set = find_dense_set(&g, 100, 0.05).unwrap();
        assert_eq!(set.len(), 101);
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn sparse_graph_has_none() {
        let c: Vec<EdgeKey> = (0..50).map(|i| EdgeKey::new(i, (i + 1) % 50)).collect();
        let g = ExplicitGraph::from_edges(50, &c).unwrap();
        assert!(find_dense_set(&g, 40, 0.01).is_none());
    }

    #[test]
    fn peeling_removes_pendant_layers() {
        // K_5 on 0..5 with a path 4-5-6 hanging off it.
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push(EdgeKey::new(u, v));
            }
        }
        edges.push(EdgeKey::new(4, 5));
        edges.push(EdgeKey::new(5, 6));
        let g = ExplicitGraph::from_edges(7, &edges).unwrap();
        let mut p = Peeler::new(7);
        let all: Vec<VertexId> = (0..7).collect();
        assert_eq!(p.peel(&g, &all, 4), vec![0, 1, 2, 3, 4]);
        assert_eq!(p.peel(&g, &all, 2), vec![0, 1, 2, 3, 4]);
    }
}
