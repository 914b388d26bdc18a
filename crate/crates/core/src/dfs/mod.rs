//! Depth-first exploration of `G_p` with lazy edge queries.
//!
//! Vertices move from the unreached set `U` onto the stack `S` and from the
//! stack into the reached set `R`, one per round. The top of the stack
//! queries its host edges into `U` in ascending neighbor order; a positive
//! answer pushes the neighbor, and a vertex with no unqueried edge into `U`
//! left is popped. Each host edge is queried at most once.

mod trace;
mod tree;

pub use trace::{check_properties, stack_path, DfsEvent, DfsTrace, PropertyReport, Verdict};
pub use tree::RootedForest;

use serde::Serialize;

use crate::graph::{Adjacency, EdgeKey, GraphView, VertexId, NONE};
use crate::percolation::PercolationOracle;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum RootPolicy {
    #[default]
    LowestIndex,
    /// Take roots from this set while one is unreached, lowest index first.
    Priority(Vec<VertexId>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StopCondition {
    #[default]
    None,
    /// Halt the first time `|R ∪ S|` equals this.
    ReachedSize(usize),
    /// Halt once this explorer has made this many queries.
    QueryBudget(u64),
    /// Halt right before the next pop, leaving the stack at a local maximum.
    BeforePop,
}

const UNREACHED: u8 = 0;
const ON_STACK: u8 = 1;
const REACHED: u8 = 2;
const EXCLUDED: u8 = 3;

/// A root together with the number of rounds made before it was chosen and
/// `|R|` at that moment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RootStart {
    pub vertex: VertexId,
    pub round: u64,
    pub reached: usize,
}

/// A resumable DFS over one host graph.
pub struct DfsExplorer<'g, G: GraphView + ?Sized> {
    g: &'g G,
    status: Vec<u8>,
    cursor: Vec<u32>,
    /// `skip[x]` leads to the smallest unreached id `>= x`.
    skip: Vec<u32>,
    stack: Vec<VertexId>,
    parent: Vec<VertexId>,
    depth: Vec<u32>,
    order: Vec<VertexId>,
    roots: Vec<RootStart>,
    priority: Vec<VertexId>,
    priority_at: usize,
    rounds: u64,
    queries: u64,
    positive: u64,
    deepest: VertexId,
    trace: Option<Vec<DfsEvent>>,
}

impl<'g, G: GraphView + ?Sized> DfsExplorer<'g, G> {
    pub fn new(g: &'g G, policy: RootPolicy, record_trace: bool) -> Self {
        let n = g.vertex_count();
        let mut priority = match policy {
            RootPolicy::LowestIndex => Vec::new(),
            RootPolicy::Priority(set) => set,
        };
        priority.sort_unstable();
        priority.dedup();
        priority.retain(|&v| (v as usize) < n);
        DfsExplorer {
            g,
            status: vec![UNREACHED; n],
            cursor: vec![0; n],
            skip: (0..=n as u32).collect(),
            stack: Vec::new(),
            parent: vec![NONE; n],
            depth: vec![0; n],
            order: Vec::new(),
            roots: Vec::new(),
            priority,
            priority_at: 0,
            rounds: 0,
            queries: 0,
            positive: 0,
            deepest: NONE,
            trace: record_trace.then(Vec::new),
        }
    }

    /// Explores only `g[allowed]`; every other vertex counts as already
    /// reached and is never queried.
    pub fn restricted(g: &'g G, allowed: &[VertexId], policy: RootPolicy, record_trace: bool) -> Self {
        let mut dfs = Self::new(g, policy, record_trace);
        let mut keep = vec![false; g.vertex_count()];
        for &v in allowed {
            keep[v as usize] = true;
        }
        for (v, &k) in keep.iter().enumerate() {
            if !k {
                dfs.status[v] = EXCLUDED;
                dfs.skip[v] = v as u32 + 1;
            }
        }
        dfs.priority.retain(|&v| keep[v as usize]);
        dfs
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.skip[r as usize] != r {
            r = self.skip[r as usize];
        }
        let mut y = x;
        while self.skip[y as usize] != r {
            let next = self.skip[y as usize];
            self.skip[y as usize] = r;
            y = next;
        }
        r
    }

    fn record(&mut self, e: DfsEvent) {
        if let Some(t) = &mut self.trace {
            t.push(e);
        }
    }

    fn push(&mut self, w: VertexId, parent: VertexId) {
        let wi = w as usize;
        self.status[wi] = ON_STACK;
        self.skip[wi] = w + 1;
        self.parent[wi] = parent;
        self.depth[wi] = if parent == NONE {
            0
        } else {
            self.depth[parent as usize] + 1
        };
        self.cursor[wi] = match self.g.adjacency(w) {
            Adjacency::List(_) => 0,
            Adjacency::Span { span, .. } => span.start,
        };
        if self.deepest == NONE || self.depth[wi] > self.depth[self.deepest as usize] {
            self.deepest = w;
        }
        self.order.push(w);
        self.stack.push(w);
        self.rounds += 1;
        self.record(DfsEvent::Push(w));
    }

    fn next_root(&mut self) -> Option<VertexId> {
        while self.priority_at < self.priority.len() {
            let v = self.priority[self.priority_at];
            if self.status[v as usize] == UNREACHED {
                return Some(v);
            }
            self.priority_at += 1;
        }
        let r = self.find(0);
        ((r as usize) < self.status.len()).then_some(r)
    }

    /// Next unreached host neighbor of `v` at or after its cursor.
    fn next_candidate(&mut self, v: VertexId) -> Option<VertexId> {
        let vi = v as usize;
        match self.g.adjacency(v) {
            Adjacency::List(list) => {
                let mut i = self.cursor[vi] as usize;
                while i < list.len() && self.status[list[i] as usize] != UNREACHED {
                    i += 1;
                }
                self.cursor[vi] = i as u32;
                list.get(i).copied()
            }
            Adjacency::Span { span, missing, .. } => {
                let mut x = self.cursor[vi];
                loop {
                    let w = self.find(x);
                    if w >= span.end {
                        self.cursor[vi] = span.end;
                        return None;
                    }
                    if missing.binary_search(&w).is_ok() {
                        x = w + 1;
                        continue;
                    }
                    self.cursor[vi] = w;
                    return Some(w);
                }
            }
        }
    }

    /// Advances the cursor of `v` past the neighbor it just queried.
    fn advance(&mut self, v: VertexId, w: VertexId) {
        let vi = v as usize;
        match self.g.adjacency(v) {
            Adjacency::List(_) => self.cursor[vi] += 1,
            Adjacency::Span { .. } => self.cursor[vi] = w + 1,
        }
    }

    fn should_stop(&self, stop: StopCondition) -> bool {
        match stop {
            StopCondition::None => false,
            StopCondition::ReachedSize(t) => self.order.len() == t,
            StopCondition::QueryBudget(q) => self.queries >= q,
            StopCondition::BeforePop => false,
        }
    }

    /// Runs until `stop` holds or every allowed vertex is reached. Returns
    /// true when the exploration is complete.
    pub fn run(&mut self, oracle: &mut PercolationOracle, stop: StopCondition) -> bool {
        loop {
            if self.should_stop(stop) {
                return self.is_finished();
            }
            let Some(&top) = self.stack.last() else {
                match self.next_root() {
                    Some(r) => {
                        self.roots.push(RootStart {
                            vertex: r,
                            round: self.rounds,
                            reached: self.order.len(),
                        });
                        self.record(DfsEvent::NewRoot(r));
                        self.push(r, NONE);
                        continue;
                    }
                    None => return true,
                }
            };
            match self.next_candidate(top) {
                Some(w) => {
                    let alive = oracle.test(EdgeKey::new(top, w));
                    self.queries += 1;
                    self.advance(top, w);
                    self.record(DfsEvent::Query { v: top, w, alive });
                    if alive {
                        self.positive += 1;
                        self.push(w, top);
                    }
                }
                None => {
                    if stop == StopCondition::BeforePop {
                        return false;
                    }
                    self.stack.pop();
                    self.status[top as usize] = REACHED;
                    self.rounds += 1;
                    self.record(DfsEvent::Pop(top));
                }
            }
        }
    }

    pub fn is_finished(&self) -> bool {
        self.stack.is_empty() && !self.status.contains(&UNREACHED)
    }

    /// Stack content, bottom to top.
    pub fn stack(&self) -> &[VertexId] {
        &self.stack
    }

    /// `|R ∪ S|`.
    pub fn discovered(&self) -> usize {
        self.order.len()
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn positive_answers(&self) -> u64 {
        self.positive
    }

    /// Pushes plus pops so far.
    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn roots(&self) -> &[RootStart] {
        &self.roots
    }

    pub fn is_unreached(&self, v: VertexId) -> bool {
        self.status[v as usize] == UNREACHED
    }

    /// The longest stack seen so far: the root path of the deepest vertex.
    pub fn deepest_path(&self) -> Vec<VertexId> {
        if self.deepest == NONE {
            return Vec::new();
        }
        let mut path = Vec::new();
        let mut x = self.deepest;
        while x != NONE {
            path.push(x);
            x = self.parent[x as usize];
        }
        path.reverse();
        path
    }

    pub fn forest(&self) -> RootedForest {
        RootedForest::from_discovery(self.parent.clone(), self.order.clone())
    }

    pub fn trace(&self) -> Option<DfsTrace> {
        self.trace.as_ref().map(|events| DfsTrace {
            n: self.g.vertex_count(),
            events: events.clone(),
        })
    }

    pub fn into_parts(self) -> (RootedForest, Option<DfsTrace>) {
        let n = self.g.vertex_count();
        let forest = RootedForest::from_discovery(self.parent, self.order);
        (forest, self.trace.map(|events| DfsTrace { n, events }))
    }
}

/// Result of [`run_dfs`].
pub struct DfsOutcome {
    pub forest: RootedForest,
    pub trace: Option<DfsTrace>,
    /// Live stack at the moment the run halted; empty after completion.
    pub stack: Vec<VertexId>,
    pub finished: bool,
    pub queries: u64,
    pub roots: Vec<RootStart>,
}

pub fn run_dfs<G: GraphView + ?Sized>(
    g: &G,
    oracle: &mut PercolationOracle,
    policy: RootPolicy,
    stop: StopCondition,
    record_trace: bool,
) -> DfsOutcome {
    let mut dfs = DfsExplorer::new(g, policy, record_trace);
    let finished = dfs.run(oracle, stop);
    let stack = dfs.stack().to_vec();
    let queries = dfs.queries();
    let roots = dfs.roots().to_vec();
    let (forest, trace) = dfs.into_parts();
    DfsOutcome {
        forest,
        trace,
        stack,
        finished,
        queries,
        roots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CompleteGraph, EdgeKey, ExplicitGraph};

    fn oracle(p: f64, n: usize) -> PercolationOracle {
        PercolationOracle::with_p(p, 9, 0, n).unwrap()
    }

    #[test]
    fn complete_graph_at_p_one_is_a_path() {
        let g = CompleteGraph::new(3).unwrap();
        let out = run_dfs(&g, &mut oracle(1.0, 4), RootPolicy::LowestIndex, StopCondition::None, true);
        assert!(out.finished);
        assert_eq!(out.forest.parents(), &[NONE, 0, 1, 2]);
        assert_eq!(out.queries, 3);
    }

    #[test]
    fn p_zero_gives_singletons() {
        let g = CompleteGraph::new(5).unwrap();
        let mut o = oracle(0.0, 6);
        let out = run_dfs(&g, &mut o, RootPolicy::LowestIndex, StopCondition::None, false);
        assert_eq!(out.forest.roots().count(), 6);
        assert_eq!(o.counters().positive, 0);
        assert_eq!(out.queries, 15);
    }

    #[test]
    fn two_triangles() {
        let edges: Vec<EdgeKey> = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
            .iter()
            .map(|&(u, v)| EdgeKey::new(u, v))
            .collect();
        let g = ExplicitGraph::from_edges(6, &edges).unwrap();
        let out = run_dfs(&g, &mut oracle(1.0, 6), RootPolicy::LowestIndex, StopCondition::None, false);
        assert_eq!(out.forest.roots().collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(out.forest.parents(), &[NONE, 0, 1, NONE, 3, 4]);
    }

    #[test]
    fn priority_roots_and_stop() {
        let g = CompleteGraph::new(9).unwrap();
        let out = run_dfs(
            &g,
            &mut oracle(1.0, 10),
            RootPolicy::Priority(vec![7]),
            StopCondition::ReachedSize(4),
            false,
        );
        assert!(!out.finished);
        assert_eq!(out.stack, vec![7, 0, 1, 2]);
    }

    #[test]
    fn restricted_exploration_skips_excluded_vertices() {
        let g = CompleteGraph::new(5).unwrap();
        let mut o = oracle(1.0, 6);
        let mut dfs = DfsExplorer::restricted(&g, &[1, 3, 5], RootPolicy::LowestIndex, false);
        assert!(dfs.run(&mut o, StopCondition::None));
        assert_eq!(dfs.deepest_path(), vec![1, 3, 5]);
        assert_eq!(dfs.queries(), 2);
    }

    #[test]
    fn resumes_after_query_budget() {
        let g = CompleteGraph::new(30).unwrap();
        let mut o = oracle(0.3, 31);
        let full = run_dfs(&g, &mut oracle(0.3, 31), RootPolicy::LowestIndex, StopCondition::None, true);
        let mut dfs = DfsExplorer::new(&g, RootPolicy::LowestIndex, true);
        assert!(!dfs.run(&mut o, StopCondition::QueryBudget(10)));
        assert_eq!(dfs.queries(), 10);
        assert!(dfs.run(&mut o, StopCondition::None));
        assert_eq!(dfs.trace(), full.trace);
    }
}
