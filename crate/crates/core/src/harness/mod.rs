//! Repeated seeded runs, statistics and reports.

mod report;
mod stats;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{run_baseline, BaselineAlgorithm, BaselineConfig};
use crate::continuous::{optimize_continuous, ContinuousConfig};
use crate::engine::{optimize, EngineConfig, EngineError};
use crate::ingest::{load_instance, IngestError, Instance};
use crate::operators::OperatorConfig;
use crate::problems::{
    tsp_tour_length, Benchmark, BenchmarkId, KnapsackProblem, Metric, QapInstance, RoadNetwork, Sense, ThresholdPolicy,
    TspInstance,
};
use crate::trace::ConvergenceTrace;

pub use report::{export_report, load_report_config, ReportFormat, CSV_HEADER};
pub use stats::{aggregate_stats, aggregate_stats_with_sense, RunStats};

/// Environment variable naming the dataset root directory.
pub const DATA_DIR_ENV: &str = "GHOSA_DATA_DIR";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Instance(#[from] IngestError),
    #[error("run {run} failed: {source}")]
    Run {
        run: usize,
        #[source]
        source: EngineError,
    },
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("report: {0}")]
    Json(#[from] serde_json::Error),
}

/// What to optimize. Paths may be relative to the dataset root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProblemSpec {
    Tsp {
        path: PathBuf,
        #[serde(default)]
        metric_override: Option<Metric>,
    },
    Qap {
        path: PathBuf,
    },
    Knapsack {
        path: PathBuf,
        /// One-based index of the problem inside the file.
        #[serde(default = "one")]
        index: usize,
        policy: ThresholdPolicy,
    },
    Road {
        path: PathBuf,
        /// Seeded waiting-time noise `(amplitude, seed)`, off when absent.
        #[serde(default)]
        awt_noise: Option<(f64, u64)>,
    },
    Benchmark {
        id: BenchmarkId,
        #[serde(default)]
        dim: Option<usize>,
    },
}

fn one() -> usize {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ghosa,
    Ga,
    Pso,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LbnivSettings {
    pub eps0: f64,
    pub k: f64,
    pub bias: f64,
}

impl Default for LbnivSettings {
    fn default() -> Self {
        Self {
            eps0: 0.2,
            k: 2.0,
            bias: 0.001,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub iterations: usize,
    pub population: usize,
    /// Percentage of worst agents re-initialized per iteration.
    pub replace_percent: f64,
    pub operators: OperatorConfig,
    pub lbniv: LbnivSettings,
    /// GA/PSO settings; defaults are used when absent.
    #[serde(default)]
    pub baseline: Option<BaselineConfig>,
    pub seed_base: u64,
    /// Worker threads; 0 picks the available parallelism.
    #[serde(default)]
    pub workers: usize,
    /// Overrides the best-known value supplied by the instance.
    #[serde(default)]
    pub best_known: Option<f64>,
    /// Stop a run as soon as it reaches the best-known value.
    #[serde(default)]
    pub stop_at_best_known: bool,
}

impl ExperimentConfig {
    pub fn new(problem: ProblemSpec, algorithm: Algorithm) -> Self {
        Self {
            problem,
            algorithm,
            runs: 10,
            iterations: 25_000,
            population: 50,
            replace_percent: 10.0,
            operators: OperatorConfig::default(),
            lbniv: LbnivSettings::default(),
            baseline: None,
            seed_base: 0,
            workers: 0,
            best_known: None,
            stop_at_best_known: false,
        }
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.runs as u64).map(|k| self.seed_base + k).collect()
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs == 0 {
            return Err(HarnessError::Config("runs must be at least 1".into()));
        }
        let is_continuous = matches!(self.problem, ProblemSpec::Benchmark { .. });
        if self.algorithm != Algorithm::Ghosa && !is_continuous {
            return Err(HarnessError::Config(
                "GA and PSO baselines only run on benchmark functions".into(),
            ));
        }
        self.engine_config(0, None)
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        if let Some(b) = &self.baseline {
            b.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        }
        if !(self.lbniv.k > 1.0 && self.lbniv.eps0 > 0.0) {
            return Err(HarnessError::Config("LBNIV needs k > 1 and eps0 > 0".into()));
        }
        Ok(())
    }

    fn engine_config(&self, seed: u64, target: Option<f64>) -> EngineConfig {
        EngineConfig {
            population: self.population,
            replace_percent: self.replace_percent,
            iterations: self.iterations,
            seed,
            operators: self.operators.clone(),
            target,
        }
    }

    fn continuous_config(&self, seed: u64, target: Option<f64>) -> ContinuousConfig {
        ContinuousConfig {
            population: self.population,
            iterations: self.iterations,
            replace_percent: self.replace_percent,
            seed,
            k: self.lbniv.k,
            bias: self.lbniv.bias,
            eps0: self.lbniv.eps0,
            operators: self.operators.clone(),
            target,
        }
    }

    fn baseline_config(&self, algorithm: BaselineAlgorithm, target: Option<f64>) -> BaselineConfig {
        let mut b = self.baseline.clone().unwrap_or_else(|| BaselineConfig::new(algorithm));
        b.algorithm = algorithm;
        b.population = self.population;
        b.iterations = self.iterations;
        b.target = target;
        b
    }
}

/// Resolves `path` against the dataset root when it is relative and does
/// not exist as given.
pub fn resolve_instance_path(path: &Path, data_dir: Option<&Path>) -> PathBuf {
    match data_dir {
        Some(root) if path.is_relative() && !path.exists() => root.join(path),
        _ => path.to_path_buf(),
    }
}

/// A problem ready to optimize.
#[derive(Clone, Debug)]
pub enum LoadedProblem {
    Tsp(TspInstance),
    Qap(QapInstance),
    Knapsack(KnapsackProblem),
    Road(RoadNetwork),
    Benchmark(Benchmark),
}

impl LoadedProblem {
    pub fn sense(&self) -> Sense {
        match self {
            LoadedProblem::Knapsack(_) => Sense::Maximize,
            _ => Sense::Minimize,
        }
    }

    pub fn name(&self) -> String {
        match self {
            LoadedProblem::Tsp(t) => t.name.trim_end_matches(".tsp").to_string(),
            LoadedProblem::Qap(q) => q.name.clone(),
            LoadedProblem::Knapsack(k) => k.instance.name.clone(),
            LoadedProblem::Road(r) => r.name.clone(),
            LoadedProblem::Benchmark(b) => b.name(),
        }
    }

    pub fn dim(&self) -> String {
        match self {
            LoadedProblem::Tsp(t) => t.n.to_string(),
            LoadedProblem::Qap(q) => q.n.to_string(),
            LoadedProblem::Knapsack(k) => format!("{},{}", k.instance.m, k.instance.n),
            LoadedProblem::Road(r) => r.node_count().to_string(),
            LoadedProblem::Benchmark(b) => b.dim.to_string(),
        }
    }

    /// Best-known objective value carried by the instance.
    pub fn best_known(&self) -> Option<f64> {
        match self {
            LoadedProblem::Tsp(t) => t.best_known,
            LoadedProblem::Qap(q) => q.best_known.map(|v| v as f64),
            LoadedProblem::Knapsack(k) => k.instance.best_known,
            LoadedProblem::Road(_) => None,
            LoadedProblem::Benchmark(b) => Some(b.optimum()),
        }
    }
}

/// Loads the problem named by `spec`, resolving relative paths against
/// `data_dir`.
pub fn load_problem(spec: &ProblemSpec, data_dir: Option<&Path>) -> Result<LoadedProblem, HarnessError> {
    let load = |p: &Path| load_instance(&resolve_instance_path(p, data_dir), None);
    let wrong = |what: &str| HarnessError::Config(format!("instance file does not hold a {what} problem"));
    Ok(match spec {
        ProblemSpec::Tsp { path, metric_override } => {
            let Instance::Tsp(t) = load(path)?.payload else {
                return Err(wrong("TSP"));
            };
            match metric_override {
                Some(m) => LoadedProblem::Tsp(t.with_metric(*m).map_err(IngestError::from)?),
                None => LoadedProblem::Tsp(t),
            }
        }
        ProblemSpec::Qap { path } => {
            let Instance::Qap(q) = load(path)?.payload else {
                return Err(wrong("QAP"));
            };
            LoadedProblem::Qap(q)
        }
        ProblemSpec::Knapsack { path, index, policy } => {
            let Instance::Knapsack(list) = load(path)?.payload else {
                return Err(wrong("knapsack"));
            };
            let count = list.len();
            let inst = index
                .checked_sub(1)
                .and_then(|i| list.into_iter().nth(i))
                .ok_or_else(|| HarnessError::Config(format!("problem index {index} outside 1..={count}")))?;
            LoadedProblem::Knapsack(KnapsackProblem::new(inst, *policy).map_err(IngestError::from)?)
        }
        ProblemSpec::Road { path, awt_noise } => {
            let Instance::Road(r) = load(path)?.payload else {
                return Err(wrong("road network"));
            };
            match awt_noise {
                Some((amp, seed)) => LoadedProblem::Road(r.with_awt_noise(*amp, *seed)),
                None => LoadedProblem::Road(r),
            }
        }
        ProblemSpec::Benchmark { id, dim } => LoadedProblem::Benchmark(match dim {
            Some(d) => Benchmark::with_dim(*id, *d).map_err(IngestError::from)?,
            None => Benchmark::new(*id),
        }),
    })
}

/// Outcome of one seeded run, in objective units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub best: f64,
    /// Best solution: one-based event string or real vector.
    pub solution: Vec<f64>,
    /// Additional measurements of the best solution, e.g. the plain
    /// Euclidean length of a TSP tour.
    pub extras: BTreeMap<String, f64>,
    pub evaluations: u64,
    /// Global-best history in objective units.
    #[serde(skip)]
    pub trace: ConvergenceTrace,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub name: String,
    pub dim: String,
    pub sense: Sense,
    pub best_known: Option<f64>,
    pub runs: Vec<RunRecord>,
    pub stats: RunStats,
}

impl ExperimentResult {
    pub fn bests(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.best).collect()
    }
}

fn to_objective_trace(trace: ConvergenceTrace, sense: Sense) -> ConvergenceTrace {
    match sense {
        Sense::Minimize => trace,
        Sense::Maximize => ConvergenceTrace {
            total: trace.total.into_iter().map(|v| sense.to_objective(v)).collect(),
            components: trace.components,
        },
    }
}

fn tsp_extras(t: &TspInstance, tour: &crate::sequence::EventSequence) -> BTreeMap<String, f64> {
    let mut extras = BTreeMap::new();
    if let Some(coords) = &t.coords {
        if let Ok(plain) = TspInstance::from_coords("plain", coords.clone(), Metric::Euclidean) {
            if let Ok(len) = tsp_tour_length(&plain, tour) {
                extras.insert("euclidean_length".into(), len);
            }
        }
        if t.metric != Metric::Geo {
            if let Ok(geo) = t.with_metric(Metric::Geo) {
                if let Ok(len) = tsp_tour_length(&geo, tour) {
                    extras.insert("geo_length".into(), len);
                }
            }
        }
    }
    extras
}

fn run_one(
    cfg: &ExperimentConfig,
    problem: &LoadedProblem,
    seed: u64,
    target: Option<f64>,
) -> Result<RunRecord, EngineError> {
    let sense = problem.sense();
    let fitness_target = target.map(|t| sense.to_fitness(t));
    let discrete = |out: crate::engine::Outcome, extras: BTreeMap<String, f64>| RunRecord {
        seed,
        best: sense.to_objective(out.best.fitness),
        solution: out.best.sequence.to_one_based().into_iter().map(|v| v as f64).collect(),
        extras,
        evaluations: out.evaluations,
        trace: to_objective_trace(out.trace, sense),
    };
    let ecfg = cfg.engine_config(seed, fitness_target);
    Ok(match problem {
        LoadedProblem::Tsp(t) => {
            let out = optimize(t, &ecfg)?;
            let extras = tsp_extras(t, &out.best.sequence);
            discrete(out, extras)
        }
        LoadedProblem::Qap(q) => discrete(optimize(q, &ecfg)?, BTreeMap::new()),
        LoadedProblem::Knapsack(k) => {
            let out = optimize(k, &ecfg)?;
            let extras = BTreeMap::from([("threshold".to_string(), out.best.threshold as f64)]);
            discrete(out, extras)
        }
        LoadedProblem::Road(r) => {
            let out = optimize(r, &ecfg)?;
            let comps = crate::problems::road_fitness(r, &out.best.sequence).ok();
            let extras = comps
                .map(|c| BTreeMap::from([("travel".to_string(), c.f1), ("waiting".to_string(), c.f2)]))
                .unwrap_or_default();
            discrete(out, extras)
        }
        LoadedProblem::Benchmark(b) => match cfg.algorithm {
            Algorithm::Ghosa => {
                let out = optimize_continuous(b, &cfg.continuous_config(seed, fitness_target))?;
                RunRecord {
                    seed,
                    best: out.best_fitness,
                    solution: out.best_x,
                    extras: BTreeMap::new(),
                    evaluations: out.evaluations,
                    trace: out.trace,
                }
            }
            Algorithm::Ga | Algorithm::Pso => {
                let algo = if cfg.algorithm == Algorithm::Ga {
                    BaselineAlgorithm::Ga
                } else {
                    BaselineAlgorithm::Pso
                };
                let out = run_baseline(b, &cfg.baseline_config(algo, fitness_target), seed)?;
                RunRecord {
                    seed,
                    best: out.best_fitness,
                    solution: out.best_x,
                    extras: BTreeMap::new(),
                    evaluations: out.evaluations,
                    trace: out.trace,
                }
            }
        },
    })
}

/// Runs `cfg.runs` seeded runs on an already loaded problem.
pub fn run_loaded(cfg: &ExperimentConfig, problem: &LoadedProblem) -> Result<ExperimentResult, HarnessError> {
    cfg.validate()?;
    if matches!(problem, LoadedProblem::Benchmark(_)) != matches!(cfg.problem, ProblemSpec::Benchmark { .. }) {
        return Err(HarnessError::Config(
            "loaded problem does not match the configuration".into(),
        ));
    }
    let best_known = cfg.best_known.or_else(|| problem.best_known());
    let target = if cfg.stop_at_best_known { best_known } else { None };
    let seeds = cfg.seeds();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    let results: Vec<Result<RunRecord, EngineError>> =
        pool.install(|| seeds.par_iter().map(|&s| run_one(cfg, problem, s, target)).collect());
    let mut runs = Vec::with_capacity(results.len());
    for (run, r) in results.into_iter().enumerate() {
        runs.push(r.map_err(|source| HarnessError::Run { run, source })?);
    }
    let bests: Vec<f64> = runs.iter().map(|r| r.best).collect();
    let sense = problem.sense();
    let stats = aggregate_stats_with_sense(&bests, best_known, sense).expect("at least one run");
    Ok(ExperimentResult {
        config: cfg.clone(),
        name: problem.name(),
        dim: problem.dim(),
        sense,
        best_known,
        runs,
        stats,
    })
}

/// Loads the configured problem and runs the experiment.
pub fn run_experiment(cfg: &ExperimentConfig, data_dir: Option<&Path>) -> Result<ExperimentResult, HarnessError> {
    cfg.validate()?;
    let problem = load_problem(&cfg.problem, data_dir)?;
    run_loaded(cfg, &problem)
}
