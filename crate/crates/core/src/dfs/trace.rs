use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::tree::RootedForest;
use crate::error::{Error, Result};
use crate::graph::{edges, EdgeKey, GraphView, VertexId, NONE};
use crate::percolation::EdgeCoin;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DfsEvent {
    NewRoot(VertexId),
    Query { v: VertexId, w: VertexId, alive: bool },
    Push(VertexId),
    Pop(VertexId),
}

/// Event log of one exploration over a host with `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DfsTrace {
    pub n: usize,
    pub events: Vec<DfsEvent>,
}

impl DfsTrace {
    /// One event per line: `n N`, then `root v`, `query v w 0|1`, `push v`,
    /// `pop v`.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 * self.events.len() + 16);
        writeln!(s, "n {}", self.n).unwrap();
        for e in &self.events {
            match *e {
                DfsEvent::NewRoot(v) => writeln!(s, "root {v}"),
                DfsEvent::Query { v, w, alive } => writeln!(s, "query {v} {w} {}", alive as u8),
                DfsEvent::Push(v) => writeln!(s, "push {v}"),
                DfsEvent::Pop(v) => writeln!(s, "pop {v}"),
            }
            .unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut events = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let bad = |reason: &str| Error::Parse {
                line,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = raw.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let num = |j: usize| -> Result<u64> {
                fields
                    .get(j)
                    .ok_or_else(|| bad("missing field"))?
                    .parse::<u64>()
                    .map_err(|_| bad("not a number"))
            };
            let vertex = |j: usize| -> Result<VertexId> {
                let x = num(j)?;
                if x >= NONE as u64 {
                    return Err(bad("vertex id out of range"));
                }
                Ok(x as VertexId)
            };
            let arity = |k: usize| -> Result<()> {
                if fields.len() == k {
                    Ok(())
                } else {
                    Err(bad("wrong number of fields"))
                }
            };
            if n.is_none() {
                if fields[0] != "n" {
                    return Err(bad("expected header `n N`"));
                }
                arity(2)?;
                n = Some(num(1)? as usize);
                continue;
            }
            let event = match fields[0] {
                "root" => {
                    arity(2)?;
                    DfsEvent::NewRoot(vertex(1)?)
                }
                "push" => {
                    arity(2)?;
                    DfsEvent::Push(vertex(1)?)
                }
                "pop" => {
                    arity(2)?;
                    DfsEvent::Pop(vertex(1)?)
                }
                "query" => {
                    arity(4)?;
                    let alive = match fields[3] {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad("answer must be 0 or 1")),
                    };
                    DfsEvent::Query {
                        v: vertex(1)?,
                        w: vertex(2)?,
                        alive,
                    }
                }
                _ => return Err(bad("unknown event")),
            };
            events.push(event);
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            reason: "empty trace".into(),
        })?;
        Ok(DfsTrace { n, events })
    }
}

/// Outcome of one property check: the index of the first offending event
/// (or the number of events for end-of-run checks) when it fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            holds: true,
            first_violation: None,
        }
    }

    fn fail_at(&mut self, index: usize) {
        if self.holds {
            self.holds = false;
            self.first_violation = Some(index);
        }
    }
}

/// Verdicts for the four exploration properties:
/// (I) every positive answer pushes exactly one vertex;
/// (II) the stack always spans a path of alive, positively answered edges;
/// (III) a vertex enters `R` only after all its edges into `U` were answered
/// negatively;
/// (IV) every unqueried host edge inside `R` joins an ancestor and a
/// descendant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub growth: Verdict,
    pub stack_path: Verdict,
    pub reached_closed: Verdict,
    pub untested_vertical: Verdict,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.growth.holds
            && self.stack_path.holds
            && self.reached_closed.holds
            && self.untested_vertical.holds
    }
}

const U: u8 = 0;
const S: u8 = 1;
const R: u8 = 2;

/// Replays `trace` against the host and the coin that produced it.
///
/// Structural errors (pushing a non-unreached vertex, querying from below
/// the top, popping out of order, ids out of range) are reported as
/// [`Error::MalformedTrace`]. Everything else becomes a verdict.
pub fn check_properties<G: GraphView + ?Sized>(
    trace: &DfsTrace,
    g: &G,
    coin: &EdgeCoin,
) -> Result<PropertyReport> {
    let n = g.vertex_count();
    let malformed = |index: usize, reason: &str| Error::MalformedTrace {
        index,
        reason: reason.to_string(),
    };
    if trace.n != n {
        return Err(malformed(0, "vertex count differs from host"));
    }
    let mut status = vec![U; n];
    let mut stack: Vec<VertexId> = Vec::new();
    let mut parent = vec![NONE; n];
    let mut order = Vec::new();
    let mut answers: HashMap<EdgeKey, bool> = HashMap::new();
    let mut pending_root: Option<VertexId> = None;
    let mut report = PropertyReport {
        growth: Verdict::pass(),
        stack_path: Verdict::pass(),
        reached_closed: Verdict::pass(),
        untested_vertical: Verdict::pass(),
    };
    let (mut positives, mut pushes, mut roots) = (0usize, 0usize, 0usize);

    for (i, ev) in trace.events.iter().enumerate() {
        let in_range = |v: VertexId| (v as usize) < n;
        match *ev {
            DfsEvent::NewRoot(v) => {
                if !in_range(v) || status[v as usize] != U || !stack.is_empty() {
                    return Err(malformed(i, "root must be unreached with an empty stack"));
                }
                pending_root = Some(v);
                roots += 1;
            }
            DfsEvent::Query { v, w, alive } => {
                if !in_range(v) || !in_range(w) || stack.last() != Some(&v) {
                    return Err(malformed(i, "query must come from the stack top"));
                }
                if status[w as usize] != U {
                    return Err(malformed(i, "query must go into the unreached set"));
                }
                if !g.has_edge(v, w) {
                    return Err(malformed(i, "queried pair is not a host edge"));
                }
                if answers.insert(EdgeKey::new(v, w), alive).is_some() {
                    return Err(malformed(i, "edge queried twice"));
                }
                positives += alive as usize;
            }
            DfsEvent::Push(w) => {
                if !in_range(w) || status[w as usize] != U {
                    return Err(malformed(i, "push of a vertex that is not unreached"));
                }
                pushes += 1;
                if pending_root.take() == Some(w) {
                    parent[w as usize] = NONE;
                } else {
                    let Some(&top) = stack.last() else {
                        return Err(malformed(i, "push without a root or stack top"));
                    };
                    let e = EdgeKey::new(top, w);
                    if answers.get(&e) != Some(&true) || !coin.alive(e) {
                        report.stack_path.fail_at(i);
                    }
                    parent[w as usize] = top;
                }
                status[w as usize] = S;
                stack.push(w);
                order.push(w);
            }
            DfsEvent::Pop(v) => {
                if stack.last() != Some(&v) {
                    return Err(malformed(i, "pop of a vertex other than the top"));
                }
                stack.pop();
                status[v as usize] = R;
                for w in g.neighbors(v) {
                    if status[w as usize] != U {
                        continue;
                    }
                    let e = EdgeKey::new(v, w);
                    if answers.get(&e) != Some(&false) || coin.alive(e) {
                        report.reached_closed.fail_at(i);
                        break;
                    }
                }
            }
        }
        if pending_root.is_some() && !matches!(ev, DfsEvent::NewRoot(_)) {
            return Err(malformed(i, "root must be pushed immediately"));
        }
    }
    let end = trace.events.len();
    if positives + roots != pushes {
        report.growth.fail_at(end);
    }
    let forest = RootedForest::from_discovery(parent, order);
    for e in edges(g) {
        if status[e.u as usize] != R || status[e.v as usize] != R {
            continue;
        }
        if !answers.contains_key(&e) && !forest.is_vertical(e.u, e.v) {
            report.untested_vertical.fail_at(end);
            break;
        }
    }
    Ok(report)
}

/// Stack content, bottom to top, the first time `|R ∪ S|` reaches `t`.
pub fn stack_path(trace: &DfsTrace, t: usize) -> Result<Vec<VertexId>> {
    let mut stack = Vec::new();
    let mut discovered = 0usize;
    if t == 0 {
        return Ok(stack);
    }
    for ev in &trace.events {
        match *ev {
            DfsEvent::Push(w) => {
                stack.push(w);
                discovered += 1;
                if discovered == t {
                    return Ok(stack);
                }
            }
            DfsEvent::Pop(_) => {
                stack.pop();
            }
            _ => {}
        }
    }
    Err(Error::ThresholdNotReached(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfs::{run_dfs, RootPolicy, StopCondition};
    use crate::graph::CompleteGraph;
    use crate::percolation::PercolationOracle;

    fn traced(p: f64, k: usize, seed: u64) -> (CompleteGraph, DfsTrace, EdgeCoin) {
        let g = CompleteGraph::new(k).unwrap();
        let mut o = PercolationOracle::with_p(p, seed, 0, k + 1).unwrap();
        let out = run_dfs(&g, &mut o, RootPolicy::LowestIndex, StopCondition::None, true);
        (g, out.trace.unwrap(), *o.coin())
    }

    #[test]
    fn text_round_trip() {
        let (_, t, _) = traced(0.4, 12, 3);
        assert_eq!(DfsTrace::parse(&t.to_text()).unwrap(), t);
        assert!(matches!(
            DfsTrace::parse("n 3\nquery 0 1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn generated_traces_pass() {
        for seed in 0..20 {
            let (g, t, coin) = traced(0.3, 15, seed);
            assert!(check_properties(&t, &g, &coin).unwrap().all_hold());
        }
    }

    #[test]
    fn flipped_answer_is_caught() {
        let (g, t, coin) = traced(0.3, 15, 4);
        for i in 0..t.events.len() {
            if let DfsEvent::Query { v, w, alive } = t.events[i] {
                let mut bad = t.clone();
                bad.events[i] = DfsEvent::Query { v, w, alive: !alive };
                let r = check_properties(&bad, &g, &coin).unwrap();
                assert!(!r.all_hold(), "event {i}");
                assert!(r.untested_vertical.holds);
            }
        }
    }

    #[test]
    fn structural_errors() {
        let (g, mut t, coin) = traced(0.5, 6, 1);
        t.events.swap(0, 1);
        assert!(matches!(
            check_properties(&t, &g, &coin),
            Err(Error::MalformedTrace { index: 0, .. })
        ));
    }

    #[test]
    fn stack_paths() {
        let (_, t, _) = traced(1.0, 9, 0);
        assert_eq!(stack_path(&t, 9).unwrap(), (0..9).collect::<Vec<_>>());
        let (_, t0, _) = traced(0.0, 9, 0);
        assert_eq!(stack_path(&t0, 2).unwrap(), vec![1]);
        assert_eq!(stack_path(&t0, 11), Err(Error::ThresholdNotReached(11)));
    }
}
