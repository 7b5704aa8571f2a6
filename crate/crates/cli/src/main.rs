//! `ghosa`: run experiments, solve small instances exactly and check
//! instance files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghosa_core::harness::{
    export_report, load_problem, load_report_config, resolve_instance_path, run_experiment, Algorithm,
    ExperimentConfig, HarnessError, LoadedProblem, ProblemSpec, ReportFormat, DATA_DIR_ENV,
};
use ghosa_core::ingest::{load_instance, IngestError};
use ghosa_core::oracles::{
    brute_force_qap, brute_force_tsp, exact_knapsack, exact_shortest_paths, instance_key, OracleCache,
};
use ghosa_core::{BenchmarkId, Metric, ThresholdPolicy};

#[derive(Parser)]
#[command(name = "ghosa", version, about = "Green heron swarm optimization toolkit")]
struct Cli {
    /// Dataset root; relative instance paths are looked up here.
    #[arg(long, global = true, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded repetitions of an optimizer and report statistics.
    Run(RunArgs),
    /// Solve a small instance exactly.
    Oracle(OracleArgs),
    /// Parse an instance file and print a summary and checksum.
    ParseCheck(ParseCheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemKind {
    Tsp,
    Qap,
    Knapsack,
    Road,
    Benchmark,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Ghosa,
    Ga,
    Pso,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Euc2d,
    Att,
    Geo,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long, value_enum)]
    problem: Option<ProblemKind>,
    /// Instance file, or a function id such as `f6` for benchmarks.
    #[arg(long)]
    instance: Option<String>,
    /// Dimension of a scalable benchmark function.
    #[arg(long)]
    dim: Option<usize>,
    /// One-based problem index inside a multi-instance knapsack file.
    #[arg(long, default_value_t = 1)]
    index: usize,
    /// Knapsack threshold policy: resample, walk or fixed:<t>.
    #[arg(long, default_value = "walk")]
    threshold_policy: String,
    /// Replace the TSP file's edge-weight type.
    #[arg(long, value_enum)]
    metric_override: Option<MetricArg>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "ghosa")]
    algo: AlgoArg,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    /// Seed of the first run; run k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// Fraction of the population re-initialized each iteration.
    #[arg(long)]
    replace_frac: Option<f64>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    /// Stop a run once it reaches the best-known value.
    #[arg(long)]
    stop_at_best_known: bool,
    /// Start from the configuration embedded in a JSON report, or a bare
    /// configuration file. Other flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for the report and trace files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Cache file of `checksum optimum` lines.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct ParseCheckArgs {
    #[arg(long)]
    instance: PathBuf,
}

enum Failure {
    Config(String),
    Instance(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Instance(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Instance(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) => Failure::Config(e.to_string()),
            HarnessError::Instance(_) => Failure::Instance(e.to_string()),
            HarnessError::Run { .. } | HarnessError::Io { .. } | HarnessError::Json(_) => {
                Failure::Runtime(e.to_string())
            }
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        Failure::Instance(e.to_string())
    }
}

fn problem_spec(args: &ProblemArgs) -> Result<ProblemSpec, Failure> {
    let kind = args
        .problem
        .ok_or_else(|| Failure::Config("--problem is required".into()))?;
    let instance = args
        .instance
        .clone()
        .ok_or_else(|| Failure::Config("--instance is required".into()))?;
    let path = PathBuf::from(&instance);
    Ok(match kind {
        ProblemKind::Tsp => ProblemSpec::Tsp {
            path,
            metric_override: args.metric_override.map(|m| match m {
                MetricArg::Euclidean => Metric::Euclidean,
                MetricArg::Euc2d => Metric::Euc2d,
                MetricArg::Att => Metric::Att,
                MetricArg::Geo => Metric::Geo,
            }),
        },
        ProblemKind::Qap => ProblemSpec::Qap { path },
        ProblemKind::Knapsack => ProblemSpec::Knapsack {
            path,
            index: args.index,
            policy: args
                .threshold_policy
                .parse::<ThresholdPolicy>()
                .map_err(Failure::Config)?,
        },
        ProblemKind::Road => ProblemSpec::Road { path, awt_noise: None },
        ProblemKind::Benchmark => ProblemSpec::Benchmark {
            id: instance
                .parse::<BenchmarkId>()
                .map_err(|e| Failure::Config(e.to_string()))?,
            dim: args.dim,
        },
    })
}

fn base_config(args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let algorithm = match args.algo {
        AlgoArg::Ghosa => Algorithm::Ghosa,
        AlgoArg::Ga => Algorithm::Ga,
        AlgoArg::Pso => Algorithm::Pso,
    };
    let Some(path) = &args.config else {
        return Ok(ExperimentConfig::new(problem_spec(&args.problem)?, algorithm));
    };
    let mut cfg = match load_report_config(path) {
        Ok(cfg) => cfg,
        Err(HarnessError::Json(_)) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        Err(e) => return Err(Failure::Config(e.to_string())),
    };
    if args.problem.problem.is_some() {
        cfg.problem = problem_spec(&args.problem)?;
        cfg.algorithm = algorithm;
    }
    Ok(cfg)
}

fn run(args: RunArgs, data_dir: Option<&Path>) -> Result<(), Failure> {
    let mut cfg = base_config(&args)?;
    if let Some(v) = args.iters {
        cfg.iterations = v;
    }
    if let Some(v) = args.pop {
        cfg.population = v;
    }
    if let Some(v) = args.runs {
        cfg.runs = v;
    }
    if let Some(v) = args.seed {
        cfg.seed_base = v;
    }
    if let Some(v) = args.replace_frac {
        if !(0.0..1.0).contains(&v) {
            return Err(Failure::Config("--replace-frac must lie in [0, 1)".into()));
        }
        cfg.replace_percent = v * 100.0;
    }
    if let Some(v) = args.workers {
        cfg.workers = v;
    }
    cfg.stop_at_best_known |= args.stop_at_best_known;

    let res = run_experiment(&cfg, data_dir)?;
    let s = &res.stats;
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| v.to_string());
    println!(
        "{} dim={} optimum={} mean={} sd={} best={} worst={} error={}",
        res.name,
        res.dim,
        opt(res.best_known),
        s.mean,
        s.sd,
        s.best,
        s.worst,
        opt(s.error_percent)
    );
    for r in &res.runs {
        let extras: Vec<String> = r.extras.iter().map(|(k, v)| format!("{k}={v}")).collect();
        log::info!("seed {} best {} {}", r.seed, r.best, extras.join(" "));
    }
    if let Some(dir) = &args.out {
        let format = match args.format {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        };
        let files = export_report(&res, dir, format)?;
        log::info!("wrote {} files to {}", files.len(), dir.display());
    }
    Ok(())
}

fn oracle(args: OracleArgs, data_dir: Option<&Path>) -> Result<(), Failure> {
    let spec = problem_spec(&args.problem)?;
    let problem = load_problem(&spec, data_dir)?;
    let key = match &problem {
        LoadedProblem::Tsp(t) => instance_key(t),
        LoadedProblem::Qap(q) => instance_key(q),
        LoadedProblem::Knapsack(k) => instance_key(&k.instance),
        LoadedProblem::Road(r) => instance_key(r),
        LoadedProblem::Benchmark(_) => {
            return Err(Failure::Config("benchmark functions have no exact oracle".into()));
        }
    };
    let solve = || -> Result<f64, Failure> {
        let r = match &problem {
            LoadedProblem::Tsp(t) => brute_force_tsp(t),
            LoadedProblem::Qap(q) => brute_force_qap(q),
            LoadedProblem::Knapsack(k) => exact_knapsack(&k.instance),
            LoadedProblem::Road(r) => exact_shortest_paths(r),
            LoadedProblem::Benchmark(_) => unreachable!("rejected above"),
        };
        r.map(|r| r.optimum).map_err(|e| Failure::Runtime(e.to_string()))
    };
    let optimum = match &args.cache {
        Some(path) => {
            let mut cache =
                OracleCache::open(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            match cache.get(&key) {
                Some(v) => v,
                None => {
                    let v = solve()?;
                    cache
                        .insert(&key, v)
                        .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
                    v
                }
            }
        }
        None => solve()?,
    };
    println!("{} optimum={optimum} key={key}", problem.name());
    Ok(())
}

fn parse_check(args: ParseCheckArgs, data_dir: Option<&Path>) -> Result<(), Failure> {
    let path = resolve_instance_path(&args.instance, data_dir);
    let rec = load_instance(&path, None)?;
    println!("{} {} sha256={}", rec.format, path.display(), rec.checksum);
    println!("{}", rec.payload.summary());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let data_dir = cli.data_dir.as_deref();
    let outcome = match cli.command {
        Command::Run(a) => run(a, data_dir),
        Command::Oracle(a) => oracle(a, data_dir),
        Command::ParseCheck(a) => parse_check(a, data_dir),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
