use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use percpath_core::certify::validate;
use percpath_core::cycle::{find_long_cycle, CycleOptions, CycleRoute};
use percpath_core::dfs::{check_properties, run_dfs, RootPolicy, StopCondition};
use percpath_core::graph::io::{read_edge_list, write_edge_list};
use percpath_core::graph::{min_degree, GeneratorFamily, GeneratorSpec, Host};
use percpath_core::harness::{check_exchangeability, run_trials, BoundCurve, ExperimentConfig, Operation};
use percpath_core::path::{find_long_path, path_coins, PathOptions};
use percpath_core::pseudo_clique::{analyze, PseudoOptions};
use percpath_core::{edge_probability, EdgeCoin, GraphView, PercolationOracle};

#[derive(Parser)]
#[command(name = "percpath", version, about = "Long paths and cycles in percolated minimum-degree graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a host graph, print its statistics and optionally write it as an edge list.
    Gen {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run one DFS exploration with a trace and check its invariants.
    Dfs {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Find a certified long path.
    Path {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Skip the dense-set shortcut.
        #[arg(long)]
        no_dense: bool,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Find a certified long cycle.
    Cycle {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Degree classes, W/X/Y sets, 2-core and the A set of a percolated pseudo-clique.
    Pseudo {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 7)]
        ell: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Grid Monte Carlo sweep from a JSON config.
    Sweep(SweepArgs),
    /// Check that alive-edge sets do not depend on query order.
    OracleTest {
        #[command(flatten)]
        host: HostArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        orders: usize,
    },
}

#[derive(Args, Clone)]
struct HostArgs {
    /// JSON generator spec; the flags below override its fields.
    #[arg(long)]
    host_config: Option<PathBuf>,
    /// Edge-list file ("n m" then one "u v" per line) instead of a generator.
    #[arg(long, conflicts_with_all = ["host_config", "family"])]
    graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    host_seed: Option<u64>,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    master_seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    operation: Option<OperationArg>,
    #[arg(long, value_enum)]
    curve: Option<CurveArg>,
    /// Suppress the timestamp line and wall times.
    #[arg(long)]
    reproducible: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Complete,
    CompleteBipartite,
    CliqueChain,
    RandomRegular,
    PseudoClique,
}

impl From<FamilyArg> for GeneratorFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Complete => GeneratorFamily::Complete,
            FamilyArg::CompleteBipartite => GeneratorFamily::CompleteBipartite,
            FamilyArg::CliqueChain => GeneratorFamily::CliqueChain,
            FamilyArg::RandomRegular => GeneratorFamily::RandomRegular,
            FamilyArg::PseudoClique => GeneratorFamily::PseudoClique,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    BackEdge,
    ZigZag,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperationArg {
    Cycle,
    Path,
    PathFromSet,
    Bipartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    PathAlpha,
    CycleBeta,
    Lemma32,
    Lemma31,
}

/// A host plus the `k` that operations should assume.
struct Loaded {
    host: Host,
    k: usize,
    gamma: Option<f64>,
}

impl HostArgs {
    fn load(&self) -> Result<Loaded> {
        if let Some(path) = &self.graph {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let g = read_edge_list(BufReader::new(file))?;
            let k = self.k.unwrap_or_else(|| min_degree(&g));
            return Ok(Loaded {
                host: Host::Explicit(g),
                k,
                gamma: self.gamma,
            });
        }
        let mut spec: GeneratorSpec = match &self.host_config {
            Some(path) => serde_json::from_reader(BufReader::new(
                File::open(path).with_context(|| format!("opening {}", path.display()))?,
            ))
            .with_context(|| format!("parsing {}", path.display()))?,
            None => {
                let Some(family) = self.family else {
                    bail!(Usage("one of --family, --host-config or --graph is required".into()));
                };
                GeneratorSpec::new(family.into(), 0)
            }
        };
        if let Some(f) = self.family {
            spec.family = f.into();
        }
        if let Some(k) = self.k {
            spec.k = k;
        }
        if spec.k == 0 {
            bail!(Usage("--k must be at least 1".into()));
        }
        spec.n = self.n.or(spec.n);
        spec.m = self.m.or(spec.m);
        spec.gamma = self.gamma.or(spec.gamma);
        spec.seed = self.host_seed.unwrap_or(spec.seed);
        Ok(Loaded {
            host: spec.build()?,
            k: spec.k,
            gamma: spec.gamma,
        })
    }
}

/// Marks errors that should exit with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some()
                || e.downcast_ref::<percpath_core::Error>()
                    .is_some_and(|e| matches!(e, percpath_core::Error::InvalidParameter(_)))
            {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// Returns whether every validation passed.
fn execute(command: Command) -> Result<bool> {
    match command {
        Command::Gen { host, output } => {
            let h = host.load()?;
            let g = &h.host;
            let stats = serde_json::json!({
                "n": g.vertex_count(),
                "edges": g.edge_count(),
                "min_degree": min_degree(g),
                "k": h.k,
            });
            println!("{}", serde_json::to_string_pretty(&stats)?);
            if let Some(path) = output {
                let mut out = BufWriter::new(File::create(&path)?);
                write_edge_list(g, &mut out)?;
                out.flush()?;
            }
            Ok(min_degree(g) >= h.k)
        }
        Command::Dfs { host, run } => {
            let h = host.load()?;
            let coin = EdgeCoin::new(edge_probability(run.c, h.k), run.seed, 0)?;
            let mut oracle = PercolationOracle::new(coin, h.host.vertex_count());
            let out = run_dfs(&h.host, &mut oracle, RootPolicy::LowestIndex, StopCondition::None, true);
            let trace = out.trace.expect("trace was recorded");
            let report = check_properties(&trace, &h.host, &coin)?;
            let summary = serde_json::json!({
                "n": h.host.vertex_count(),
                "queries": out.queries,
                "roots": out.roots.len(),
                "max_depth": out.forest.max_depth(),
                "properties": report,
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(report.all_hold())
        }
        Command::Path { host, run, no_dense, epsilon } => {
            let h = host.load()?;
            let opts = PathOptions {
                dense_shortcut: !no_dense,
                epsilon,
            };
            let r = find_long_path(&h.host, h.k, run.c, run.seed, &opts)?;
            println!("{}", r.to_json());
            let coins = path_coins(run.seed, run.c, h.k)?;
            Ok(r.path.is_empty() || check(validate(&h.host, &r.path, &r.certificate, false, &coins)))
        }
        Command::Cycle { host, run, route, epsilon } => {
            let h = host.load()?;
            let opts = CycleOptions {
                epsilon,
                route: match route {
                    RouteArg::Auto => CycleRoute::Auto,
                    RouteArg::BackEdge => CycleRoute::BackEdgeOnly,
                    RouteArg::ZigZag => CycleRoute::ZigZagOnly,
                },
            };
            let r = find_long_cycle(&h.host, h.k, run.c, run.seed, &opts)?;
            println!("{}", r.to_json());
            let coin = EdgeCoin::new(edge_probability(run.c, h.k), run.seed, 0)?;
            Ok(r.cycle.is_empty() || check(validate(&h.host, &r.cycle, &r.certificate, true, &[coin])))
        }
        Command::Pseudo { host, run, ell, samples } => {
            let h = host.load()?;
            let opts = PseudoOptions {
                ell,
                samples,
                ..PseudoOptions::default()
            };
            let report = analyze(&h.host, h.k, h.gamma.unwrap_or(0.05), run.c, run.seed, &opts)?;
            println!("{}", report.to_json());
            Ok(true)
        }
        Command::Sweep(args) => {
            let file = File::open(&args.config).with_context(|| format!("opening {}", args.config.display()))?;
            let mut cfg: ExperimentConfig = serde_json::from_reader(BufReader::new(file))
                .map_err(|e| Usage(format!("parsing {}: {e}", args.config.display())))?;
            if let Some(t) = args.trials {
                cfg.trials = t;
            }
            if let Some(s) = args.master_seed {
                cfg.master_seed = s;
            }
            if let Some(w) = args.workers {
                cfg.workers = w;
            }
            if let Some(o) = args.output {
                cfg.output = Some(o);
            }
            if let Some(op) = args.operation {
                cfg.operation = match op {
                    OperationArg::Cycle => Operation::Cycle,
                    OperationArg::Path => Operation::Path,
                    OperationArg::PathFromSet => Operation::PathFromSet,
                    OperationArg::Bipartite => Operation::Bipartite,
                };
            }
            if let Some(curve) = args.curve {
                cfg.curve = match curve {
                    CurveArg::PathAlpha => BoundCurve::PathAlpha,
                    CurveArg::CycleBeta => BoundCurve::CycleBeta,
                    CurveArg::Lemma32 => BoundCurve::Lemma32,
                    CurveArg::Lemma31 => BoundCurve::Lemma31,
                };
            }
            cfg.reproducible |= args.reproducible;
            let out = run_trials(&cfg)?;
            if cfg.output.is_none() {
                print!("{}", out.csv);
            }
            eprintln!("{}", out.summary_json());
            Ok(out.records.iter().all(|r| r.valid))
        }
        Command::OracleTest { host, p, seed, orders } => {
            let h = host.load()?;
            let report = check_exchangeability(&h.host, p, seed, orders, seed ^ 0x0dde)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.passed())
        }
    }
}

fn check(r: percpath_core::Result<()>) -> bool {
    match r {
        Ok(()) => true,
        Err(e) => {
            eprintln!("validation failed: {e}");
            false
        }
    }
}
