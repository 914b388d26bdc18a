use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ExplicitGraph, GraphView, VertexId};

/// Largest vertex count accepted by [`brute_longest`].
pub const BRUTE_LIMIT: usize = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LongestMode {
    /// Edges on a longest simple path.
    Path,
    /// Vertices on a longest cycle, 0 when the graph is a forest.
    Cycle,
}

/// Exact longest path or cycle by dynamic programming over
/// `(vertex subset, endpoint)` states.
pub fn brute_longest(g: &ExplicitGraph, mode: LongestMode) -> Result<usize> {
    let n = g.vertex_count();
    if n > BRUTE_LIMIT {
        return Err(Error::SizeGuard {
            what: "vertices for exact search",
            actual: n as u64,
            limit: BRUTE_LIMIT as u64,
        });
    }
    let adj: Vec<u32> = (0..n as VertexId)
        .map(|v| g.neighbor_slice(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    Ok(match mode {
        LongestMode::Path => longest_path(&adj),
        LongestMode::Cycle => longest_cycle(&adj),
    })
}

fn longest_path(adj: &[u32]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    let mut best = 0;
    for mask in 1usize..1 << n {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        best = best.max(mask.count_ones() as usize - 1);
        extend(adj, &mut ends, mask, e);
    }
    best
}

/// Cycles are counted once from their smallest vertex `s`, walking only
/// through larger vertices.
fn longest_cycle(adj: &[u32]) -> usize {
    let n = adj.len();
    let mut best = 0;
    let mut ends = vec![0u32; 1 << n];
    for s in 0..n {
        let higher: u32 = if s + 1 >= 32 { 0 } else { !0u32 << (s + 1) };
        let allowed = (higher | 1 << s) & ((1u64 << n) - 1) as u32;
        ends.iter_mut().for_each(|x| *x = 0);
        ends[1 << s] = 1 << s;
        for mask in (1usize << s)..1 << n {
            if mask as u32 & !allowed != 0 || mask & (1 << s) == 0 {
                continue;
            }
            let e = ends[mask];
            if e == 0 {
                continue;
            }
            let size = mask.count_ones() as usize;
            if size >= 3 && e & adj[s] != 0 {
                best = best.max(size);
            }
            extend(adj, &mut ends, mask, e & allowed);
        }
    }
    best
}

fn extend(adj: &[u32], ends: &mut [u32], mask: usize, mut e: u32) {
    let full = ends.len() - 1;
    while e != 0 {
        let v = e.trailing_zeros() as usize;
        e &= e - 1;
        let mut out = adj[v] & !(mask as u32) & full as u32;
        while out != 0 {
            let w = out.trailing_zeros() as usize;
            out &= out - 1;
            ends[mask | 1 << w] |= 1 << w;
        }
    }
}
