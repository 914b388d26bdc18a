use std::collections::HashMap;

use serde::Serialize;

use super::CycleDiagnostics;
use crate::dfs::RootedForest;
use crate::error::{Error, Result};
use crate::forest::{back_edge_range, heights, marked_within_batch};
use crate::graph::{EdgeKey, GraphView, VertexId};
use crate::log_k;
use crate::percolation::PercolationOracle;

/// A vertical path of the forest, listed from its top vertex down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerticalPath {
    pub vertices: Vec<VertexId>,
    /// Marked vertices in the top vertex's subtree within distance `4k`,
    /// the top vertex included.
    pub marked: usize,
}

/// The first vertex in discovery order with height at least `4k` and at most
/// `eps k / 4` marked vertices within distance `4k` below it, with the path
/// down to the first vertex of `D_{4k}(v)`.
pub fn select_vertical_path(
    f: &RootedForest,
    marked: &[bool],
    eps: f64,
    k: usize,
) -> Option<VerticalPath> {
    let len = 4 * k;
    let h = heights(f);
    let within = marked_within_batch(f, len, Some(marked));
    let cap = eps * k as f64 / 4.0;
    let &top = f
        .order()
        .iter()
        .find(|&&v| h[v as usize] as usize >= len && within[v as usize] as f64 <= cap)?;
    let target = f.depth(top) + len;
    let &bottom = f.order()[f.euler_in(top)..=f.euler_out(top)]
        .iter()
        .find(|&&w| f.depth(w) == target)?;
    let mut vertices = Vec::with_capacity(len + 1);
    let mut x = bottom;
    vertices.push(x);
    while x != top {
        x = f.parent(x).expect("top is an ancestor of bottom");
        vertices.push(x);
    }
    vertices.reverse();
    Some(VerticalPath {
        vertices,
        marked: within[top as usize] as usize,
    })
}

/// Assembles the zig-zag cycle from the vertical path `path` (top first)
/// and back edges `chords[i] = (v_{i+1}, u_{i+2})`, each `u` above its `v`.
///
/// Bottom to top the endpoints must be ordered
/// `v_1 < v_2 < u_2 < v_3 < u_3 < ... < v_j < u_j < u_{j+1}`; the cycle then
/// uses the path segments `[v_1, v_2], [u_2, v_3], ..., [u_j, u_{j+1}]`
/// (just `[v_1, u_2]` when `j = 1`) joined by the chords.
pub fn zigzag_splice(path: &[VertexId], chords: &[(VertexId, VertexId)]) -> Result<Vec<VertexId>> {
    let j = chords.len();
    if j == 0 {
        return Err(Error::InvalidParameter("zig-zag needs at least one chord".into()));
    }
    let len = path.len();
    let index: HashMap<VertexId, usize> = path.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let height = |v: VertexId| -> Result<usize> {
        index
            .get(&v)
            .map(|&i| len - 1 - i)
            .ok_or_else(|| Error::InvalidParameter(format!("chord endpoint {v} is not on the path")))
    };
    let mut lower = Vec::with_capacity(j);
    let mut upper = Vec::with_capacity(j);
    for (i, &(v, u)) in chords.iter().enumerate() {
        let (hv, hu) = (height(v)?, height(u)?);
        if hv + 1 >= hu {
            return Err(Error::CrossingSegments(i, i));
        }
        lower.push(hv);
        upper.push(hu);
    }
    // (height, chord index) bottom to top.
    let mut seq = vec![(lower[0], 0)];
    for i in 1..j {
        seq.push((lower[i], i));
        seq.push((upper[i - 1], i - 1));
    }
    seq.push((upper[j - 1], j - 1));
    for w in seq.windows(2) {
        if w[0].0 >= w[1].0 {
            return Err(Error::CrossingSegments(w[0].1, w[1].1));
        }
    }
    let mut segment_end: HashMap<usize, usize> = HashMap::new();
    for s in seq.chunks(2) {
        segment_end.insert(s[0].0, s[1].0);
        segment_end.insert(s[1].0, s[0].0);
    }
    let mut partner: HashMap<usize, usize> = HashMap::new();
    for i in 0..j {
        partner.insert(lower[i], upper[i]);
        partner.insert(upper[i], lower[i]);
    }
    let start = seq[0].0;
    let mut cycle = Vec::new();
    let mut at = start;
    for _ in 0..j {
        let end = segment_end[&at];
        if at <= end {
            cycle.extend((at..=end).map(|h| path[len - 1 - h]));
        } else {
            cycle.extend((end..=at).rev().map(|h| path[len - 1 - h]));
        }
        at = partner[&end];
        if at == start {
            break;
        }
    }
    if at != start || cycle.len() != seq.chunks(2).map(|s| s[1].0 - s[0].0 + 1).sum::<usize>() {
        return Err(Error::ConstructionFailed("segments do not close into one cycle".into()));
    }
    Ok(cycle)
}

/// Reveals back edges along `line` (a root path, indexed by depth) starting
/// from the window below `u1_depth`. Windows are scanned nearest first;
/// only vertices accepted by `in_z` may carry a chord.
pub(crate) struct ChordSearch<'a> {
    pub line: &'a [VertexId],
    pub u1_depth: usize,
    pub eps: f64,
    pub k: usize,
}

pub(crate) struct ChordOutcome {
    /// `(v_i, u_{i+1})` as depths on the line.
    pub chords: Vec<(usize, usize)>,
    pub windows: Vec<usize>,
    pub second_window_gap: Option<usize>,
    pub reached_2k: bool,
    pub stage: &'static str,
}

impl ChordSearch<'_> {
    pub(crate) fn grow<G: GraphView + ?Sized>(
        &self,
        g: &G,
        oracle: &mut PercolationOracle,
        in_z: impl Fn(VertexId) -> bool,
    ) -> ChordOutcome {
        let (lo, hi) = back_edge_range(self.eps, self.k);
        let per_window = log_k(self.k).ceil().max(1.0) as usize;
        let z_limit = 4 * per_window;
        let cap = (4.0 / self.eps).ceil().max(1.0) as usize;
        let bottom = self.line.len() - 1;
        let mut out = ChordOutcome {
            chords: Vec::new(),
            windows: Vec::new(),
            second_window_gap: None,
            reached_2k: false,
            stage: "window-exhausted",
        };
        if lo > hi {
            out.stage = "empty-distance-window";
            return out;
        }
        let mut u_cur = self.u1_depth;
        let mut boundary = bottom + 1;
        let mut v1 = 0usize;
        loop {
            if out.chords.len() >= cap {
                out.stage = "step-cap-reached";
                break;
            }
            let first = out.chords.is_empty();
            let mut found = None;
            let mut scanned = 0;
            let mut z_seen = 0;
            'window: for d in u_cur + 1..boundary {
                scanned += 1;
                if out.chords.len() == 1 {
                    let gap = d.abs_diff(self.u1_depth);
                    out.second_window_gap = Some(out.second_window_gap.map_or(gap, |x| x.min(gap)));
                }
                let v = self.line[d];
                if !in_z(v) {
                    continue;
                }
                z_seen += 1;
                for t in (lo..=hi.min(d)).rev() {
                    let ud = d - t;
                    if !first && ud >= u_cur {
                        continue;
                    }
                    let u = self.line[ud];
                    let e = EdgeKey::new(u, v);
                    if !g.has_edge(u, v) || oracle.is_tested(e) {
                        continue;
                    }
                    if oracle.peek(e) {
                        found = Some((d, ud));
                        break 'window;
                    }
                }
                if z_seen >= z_limit {
                    break;
                }
            }
            out.windows.push(scanned);
            let Some((vd, ud)) = found else {
                break;
            };
            out.chords.push((vd, ud));
            if first {
                v1 = vd;
                boundary = vd;
            } else {
                boundary = u_cur;
            }
            u_cur = ud;
            if v1 - ud >= 2 * self.k {
                out.reached_2k = true;
                out.stage = "reached-2k";
                break;
            }
        }
        out
    }
}

/// Vertical path selection, chord growth and splice. Returns the cycle in
/// local ids and the number of chords.
pub(crate) fn run<G: GraphView + ?Sized>(
    g: &G,
    forest: &RootedForest,
    oracle: &mut PercolationOracle,
    marked: &[bool],
    eps: f64,
    k: usize,
    diag: &mut CycleDiagnostics,
) -> Option<(Vec<VertexId>, usize)> {
    let stage_prefix = if diag.stage.is_empty() {
        String::new()
    } else {
        format!("{}; ", diag.stage)
    };
    let Some(path) = select_vertical_path(forest, marked, eps, k) else {
        diag.stage = format!("{stage_prefix}no-vertical-path");
        return None;
    };
    diag.path_top = Some(oracle.host_vertex(path.vertices[0]));
    diag.path_marked = Some(path.marked);
    let bottom = *path.vertices.last().unwrap();
    let line = forest.root_path(bottom);
    let search = ChordSearch {
        line: &line,
        u1_depth: line.len() - 1 - k,
        eps,
        k,
    };
    let out = search.grow(g, oracle, |v| !marked[v as usize]);
    diag.windows = out.windows;
    diag.second_window_gap = out.second_window_gap;
    diag.reached_2k = out.reached_2k;
    diag.stage = format!("{stage_prefix}{}", out.stage);
    if out.chords.is_empty() {
        return None;
    }
    let chords: Vec<(VertexId, VertexId)> = out
        .chords
        .iter()
        .map(|&(vd, ud)| (line[vd], line[ud]))
        .collect();
    match zigzag_splice(&line, &chords) {
        Ok(cycle) => Some((cycle, chords.len())),
        Err(e) => {
            diag.stage = format!("{stage_prefix}splice-rejected: {e}");
            None
        }
    }
}
