use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{eval_bound, BoundCurve};
use crate::certify::{validate, CertifiedEdge};
use crate::cycle::{find_long_cycle, CycleOptions, CycleTag};
use crate::error::{Error, Result};
use crate::graph::{GeneratorSpec, GraphView, Host, VertexId};
use crate::path::{
    bipartite_long_path, find_long_path, path_coins, path_from_set, PathOptions, PathTag,
    SetPathOptions,
};
use crate::percolation::{derive_seed, EdgeCoin, PercolationOracle};
use crate::{edge_probability, log_k};

pub const CSV_HEADER: &str = "generator,k,c,trial,seed,mode,achieved,bound,attained,tag,ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    /// Long cycle; achieved = vertices on the cycle.
    Cycle,
    /// Long path via dense set or sprinkling; achieved = edges.
    Path,
    /// Stack path from `ceil(log k)` random start vertices.
    PathFromSet,
    /// Deep DFS path on a bipartite host.
    Bipartite,
}

impl Operation {
    pub fn name(self) -> &'static str {
        match self {
            Operation::Cycle => "cycle",
            Operation::Path => "path",
            Operation::PathFromSet => "path-from-set",
            Operation::Bipartite => "bipartite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Host recipe; its `k` is replaced by each grid value.
    pub generator: GeneratorSpec,
    pub ks: Vec<usize>,
    pub cs: Vec<f64>,
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    pub operation: Operation,
    pub curve: BoundCurve,
    /// CSV destination; the summary goes next to it as `*.summary.json`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Drops the timestamp line and zeroes wall times.
    #[serde(default)]
    pub reproducible: bool,
}

fn default_workers() -> usize {
    1
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.ks.is_empty() || self.cs.is_empty() {
            return bad("the k and c grids must be non-empty".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        for &k in &self.ks {
            if k == 0 {
                return bad("k must be at least 1".into());
            }
            for &c in &self.cs {
                if !(c >= 0.0) || c > k as f64 {
                    return bad(format!("p = c/k = {c}/{k} is not a probability"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub generator: String,
    pub k: usize,
    pub c: f64,
    pub trial: usize,
    pub seed: u64,
    pub mode: String,
    pub achieved: usize,
    pub bound: f64,
    pub attained: bool,
    pub tag: String,
    pub ms: u64,
    /// Whether the certificate re-validated.
    pub valid: bool,
    pub diagnostics: serde_json::Value,
}

impl TrialRecord {
    pub fn succeeded(&self) -> bool {
        self.valid && self.tag != "failed" && self.tag != "error"
    }

    fn csv_line(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.3},{},{},{}",
            self.generator,
            self.k,
            self.c,
            self.trial,
            self.seed,
            self.mode,
            self.achieved,
            self.bound,
            self.attained,
            self.tag,
            self.ms
        );
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub generator: String,
    pub k: usize,
    pub c: f64,
    pub mode: String,
    pub curve: BoundCurve,
    pub bound: f64,
    pub trials: usize,
    pub mean: f64,
    /// Nearest-rank 5th percentile of the achieved lengths.
    pub p5: usize,
    pub success_rate: f64,
    pub attainment_rate: f64,
    /// Results whose certificate failed re-validation.
    pub invalid: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<CellSummary>,
    pub csv: String,
}

impl SweepOutcome {
    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }
}

/// Runs every `(k, c)` cell of the grid. Trials of a cell run on a pool of
/// `workers` threads and are reported in trial order.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut records = Vec::new();
    let mut summary = Vec::new();
    let mut cell = 0u64;
    for &k in &cfg.ks {
        let mut spec = cfg.generator.clone();
        spec.k = k;
        let host = spec.build()?;
        for &c in &cfg.cs {
            let cell_seed = derive_seed(cfg.master_seed, cell);
            cell += 1;
            let bound = eval_bound(cfg.curve, c, k);
            let cell_records: Vec<TrialRecord> = pool.install(|| {
                (0..cfg.trials)
                    .into_par_iter()
                    .map(|t| {
                        let seed = derive_seed(cell_seed, t as u64);
                        let start = Instant::now();
                        let mut rec = run_one(&host, cfg.operation, k, c, seed);
                        rec.generator = spec.family.name().to_string();
                        rec.trial = t;
                        rec.bound = bound;
                        rec.attained = rec.succeeded() && rec.achieved as f64 >= bound;
                        rec.ms = if cfg.reproducible { 0 } else { start.elapsed().as_millis() as u64 };
                        rec
                    })
                    .collect()
            });
            summary.push(summarize(&cell_records, cfg.curve, bound));
            records.extend(cell_records);
        }
    }
    let mut csv = String::new();
    if !cfg.reproducible {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(csv, "# started {secs}");
    }
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for r in &records {
        r.csv_line(&mut csv);
    }
    let outcome = SweepOutcome { records, summary, csv };
    if let Some(path) = &cfg.output {
        write_outputs(&outcome, path)?;
    }
    Ok(outcome)
}

/// Writes the CSV to `path` and the summary to `path` with extension
/// `summary.json`.
pub fn write_outputs(outcome: &SweepOutcome, path: &Path) -> Result<()> {
    std::fs::write(path, &outcome.csv)?;
    std::fs::write(path.with_extension("summary.json"), outcome.summary_json())?;
    Ok(())
}

fn summarize(records: &[TrialRecord], curve: BoundCurve, bound: f64) -> CellSummary {
    let n = records.len().max(1) as f64;
    let mut lengths: Vec<usize> = records.iter().map(|r| r.achieved).collect();
    lengths.sort_unstable();
    let rank = ((0.05 * lengths.len() as f64).ceil() as usize).max(1);
    let first = &records[0];
    CellSummary {
        generator: first.generator.clone(),
        k: first.k,
        c: first.c,
        mode: first.mode.clone(),
        curve,
        bound,
        trials: records.len(),
        mean: lengths.iter().sum::<usize>() as f64 / n,
        p5: lengths[rank - 1],
        success_rate: records.iter().filter(|r| r.succeeded()).count() as f64 / n,
        attainment_rate: records.iter().filter(|r| r.attained).count() as f64 / n,
        invalid: records.iter().filter(|r| !r.valid).count(),
    }
}

/// `ceil(log k)` distinct vertices of `0..n`, drawn from `seed`.
pub fn sample_start_set(n: usize, k: usize, seed: u64) -> Vec<VertexId> {
    let size = (log_k(k).ceil() as usize).clamp(1, n.max(1)).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x5e7));
    let mut v: Vec<VertexId> = rand::seq::index::sample(&mut rng, n, size)
        .into_iter()
        .map(|i| i as VertexId)
        .collect();
    v.sort_unstable();
    v
}

struct Outcome {
    vertices: Vec<VertexId>,
    closed: bool,
    achieved: usize,
    tag: &'static str,
    certificate: Vec<CertifiedEdge>,
    coins: Vec<EdgeCoin>,
    diagnostics: serde_json::Value,
}

fn execute(host: &Host, op: Operation, k: usize, c: f64, seed: u64) -> Result<Outcome> {
    Ok(match op {
        Operation::Cycle => {
            let r = find_long_cycle(host, k, c, seed, &CycleOptions::default())?;
            Outcome {
                achieved: r.length,
                closed: true,
                tag: if r.tag == CycleTag::Failed { "failed" } else { r.tag.name() },
                coins: vec![EdgeCoin::new(edge_probability(c, k), seed, 0)?],
                diagnostics: serde_json::to_value(&r.diagnostics).unwrap_or_default(),
                vertices: r.cycle,
                certificate: r.certificate,
            }
        }
        Operation::Path => {
            let r = find_long_path(host, k, c, seed, &PathOptions::default())?;
            path_outcome(r, path_coins(seed, c, k)?)
        }
        Operation::PathFromSet => {
            let coin = EdgeCoin::new(edge_probability(c, k), seed, 0)?;
            let mut oracle = PercolationOracle::new(coin, host.vertex_count());
            let v0 = sample_start_set(host.vertex_count(), k, seed);
            let r = path_from_set(host, &mut oracle, &v0, c, k, &SetPathOptions::default());
            path_outcome(r, vec![coin])
        }
        Operation::Bipartite => {
            let coin = EdgeCoin::new(edge_probability(c, k), seed, 0)?;
            let mut oracle = PercolationOracle::new(coin, host.vertex_count());
            let r = bipartite_long_path(host, &mut oracle, c, k);
            path_outcome(r, vec![coin])
        }
    })
}

fn path_outcome(r: crate::path::PathResult, coins: Vec<EdgeCoin>) -> Outcome {
    Outcome {
        achieved: r.length,
        closed: false,
        tag: if r.tag == PathTag::Failed { "failed" } else { r.tag.name() },
        coins,
        diagnostics: serde_json::to_value(&r.diagnostics).unwrap_or_default(),
        vertices: r.path,
        certificate: r.certificate,
    }
}

fn run_one(host: &Host, op: Operation, k: usize, c: f64, seed: u64) -> TrialRecord {
    let mut rec = TrialRecord {
        generator: String::new(),
        k,
        c,
        trial: 0,
        seed,
        mode: op.name().to_string(),
        achieved: 0,
        bound: 0.0,
        attained: false,
        tag: "error".into(),
        ms: 0,
        valid: true,
        diagnostics: serde_json::Value::Null,
    };
    match execute(host, op, k, c, seed) {
        Ok(o) => {
            rec.achieved = o.achieved;
            rec.tag = o.tag.to_string();
            rec.diagnostics = o.diagnostics;
            if !o.vertices.is_empty() && o.tag != "failed" {
                if let Err(e) = validate(host, &o.vertices, &o.certificate, o.closed, &o.coins) {
                    rec.valid = false;
                    rec.tag = "invalid".into();
                    rec.diagnostics = serde_json::json!({ "validation": e.to_string() });
                }
            }
        }
        Err(e) => rec.diagnostics = serde_json::json!({ "error": e.to_string() }),
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GeneratorFamily;

    fn config(op: Operation, k: usize, cs: Vec<f64>, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            generator: GeneratorSpec::new(GeneratorFamily::Complete, k),
            ks: vec![k],
            cs,
            trials,
            master_seed: 7,
            operation: op,
            curve: BoundCurve::CycleBeta,
            output: None,
            workers: 1,
            reproducible: true,
        }
    }

    #[test]
    fn full_probability_complete_graph_cycle() {
        let out = run_trials(&config(Operation::Cycle, 9, vec![9.0], 1)).unwrap();
        assert_eq!(out.records.len(), 1);
        let r = &out.records[0];
        assert_eq!(r.achieved, 10);
        assert!(r.attained && r.valid);
        assert_eq!(out.summary.len(), 1);
        assert_eq!(out.summary[0].success_rate, 1.0);
    }

    #[test]
    fn csv_is_deterministic_and_ordered() {
        let mut cfg = config(Operation::Cycle, 60, vec![8.0, 30.0], 6);
        cfg.workers = 3;
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg).unwrap();
        assert_eq!(a.csv, b.csv);
        let lines: Vec<&str> = a.csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 13);
        let trials: Vec<usize> = a.records.iter().map(|r| r.trial).collect();
        assert_eq!(trials, vec![0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5]);
        assert_eq!(a.summary.len(), 2);
    }

    #[test]
    fn timestamp_line_only_when_not_reproducible() {
        let mut cfg = config(Operation::PathFromSet, 40, vec![20.0], 2);
        cfg.reproducible = false;
        let out = run_trials(&cfg).unwrap();
        assert!(out.csv.starts_with("# started "));
    }

    #[test]
    fn every_operation_validates() {
        for op in [Operation::Cycle, Operation::Path, Operation::PathFromSet] {
            let out = run_trials(&config(op, 50, vec![25.0], 3)).unwrap();
            assert!(out.records.iter().all(|r| r.valid), "{op:?}");
        }
        let mut cfg = config(Operation::Bipartite, 50, vec![25.0], 3);
        cfg.generator.family = GeneratorFamily::CompleteBipartite;
        let out = run_trials(&cfg).unwrap();
        assert!(out.records.iter().all(|r| r.valid && r.achieved > 0));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(run_trials(&config(Operation::Cycle, 10, vec![11.0], 1)).is_err());
        assert!(run_trials(&config(Operation::Cycle, 10, vec![5.0], 0)).is_err());
    }

    #[test]
    fn outputs_land_next_to_each_other() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = config(Operation::Cycle, 20, vec![10.0], 2);
        cfg.output = Some(dir.path().join("run.csv"));
        let out = run_trials(&cfg).unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("run.csv")).unwrap(), out.csv);
        let s: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.summary.json")).unwrap())
                .unwrap();
        assert_eq!(s[0]["trials"], 2);
    }

    #[test]
    fn start_sets_are_distinct() {
        let v = sample_start_set(1000, 10_000, 3);
        assert_eq!(v.len(), 10);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sample_start_set(3, 10_000, 1).len(), 3);
    }
}
