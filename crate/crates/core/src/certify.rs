//! Alive-edge certificates for returned paths and cycles, and an
//! independent validator that re-evaluates every coin.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, GraphView, VertexId};
use crate::percolation::{EdgeCoin, PercolationOracle};

/// One edge of a returned walk together with the round whose coin vouches
/// for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedEdge {
    pub edge: EdgeKey,
    pub round: u32,
    pub alive: bool,
}

/// Certificate for consecutive pairs of `vertices` (given in the oracle's
/// local ids), closing the walk when `closed`. Edges are reported in host
/// ids. Nothing is marked tested.
pub fn certify(vertices: &[VertexId], closed: bool, oracle: &PercolationOracle) -> Vec<CertifiedEdge> {
    let round = oracle.coin().round();
    walk_pairs(vertices, closed)
        .map(|e| CertifiedEdge {
            edge: oracle.host_edge(e),
            round,
            alive: oracle.outcome(e),
        })
        .collect()
}

/// Certificate for a walk given in host ids whose edges may come from
/// different rounds: each edge is vouched for by the first coin that keeps
/// it.
pub fn certify_rounds(vertices: &[VertexId], closed: bool, coins: &[EdgeCoin]) -> Vec<CertifiedEdge> {
    walk_pairs(vertices, closed)
        .map(|e| match coins.iter().find(|c| c.alive(e)) {
            Some(c) => CertifiedEdge {
                edge: e,
                round: c.round(),
                alive: true,
            },
            None => CertifiedEdge {
                edge: e,
                round: coins.first().map_or(0, |c| c.round()),
                alive: false,
            },
        })
        .collect()
}

fn walk_pairs(vertices: &[VertexId], closed: bool) -> impl Iterator<Item = EdgeKey> + '_ {
    let m = vertices.len();
    let count = if closed && m >= 3 { m } else { m.saturating_sub(1) };
    (0..count).map(move |i| EdgeKey::new(vertices[i], vertices[(i + 1) % m]))
}

/// Checks that `vertices` is a simple path (or cycle when `closed`) of host
/// edges, that `certificate` lists exactly its edges in order, and that each
/// edge is alive under the coin of its round.
pub fn validate<G: GraphView + ?Sized>(
    g: &G,
    vertices: &[VertexId],
    certificate: &[CertifiedEdge],
    closed: bool,
    coins: &[EdgeCoin],
) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidCertificate(msg));
    let n = g.vertex_count();
    let mut seen = HashSet::with_capacity(vertices.len());
    for &v in vertices {
        if v as usize >= n {
            return bad(format!("vertex {v} out of range"));
        }
        if !seen.insert(v) {
            return bad(format!("vertex {v} repeated"));
        }
    }
    if closed && vertices.len() < 3 {
        return bad(format!("a cycle needs 3 vertices, got {}", vertices.len()));
    }
    let expected: Vec<EdgeKey> = walk_pairs(vertices, closed).collect();
    if expected.len() != certificate.len() {
        return bad(format!(
            "{} walk edges but {} certificate entries",
            expected.len(),
            certificate.len()
        ));
    }
    for (i, (e, cert)) in expected.iter().zip(certificate).enumerate() {
        if *e != cert.edge {
            return bad(format!("entry {i} certifies {} instead of {e}", cert.edge));
        }
        if !g.has_edge(e.u, e.v) {
            return bad(format!("{e} is not a host edge"));
        }
        let Some(coin) = coins.iter().find(|c| c.round() == cert.round) else {
            return bad(format!("no coin for round {}", cert.round));
        };
        if !cert.alive || !coin.alive(*e) {
            return bad(format!("{e} is not alive in round {}", cert.round));
        }
    }
    Ok(())
}
