//! Continuous engine: baiting on real vectors followed by LBNIV variation.
//!
//! Per agent and iteration a component `j` is baited (copied from the global
//! best, taken from a random agent, or redrawn uniformly), `j` being chosen by
//! change of position over the window of components. The baited vector is
//! then varied with LBNIV, clamped and evaluated; the agent moves only on
//! improvement. Neighbours and the best are read from a snapshot taken at
//! the start of the iteration.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::EngineError;
use crate::lbniv::{adapt_and_clamp, lbniv_update_from, update_contributors, ContinuousAgent, LbnivError, LbnivParams};
use crate::operators::{change_of_position, BaitCase, OperatorConfig};
use crate::problems::Benchmark;
use crate::trace::ConvergenceTrace;

/// A box-bounded real-vector problem. Fitness is minimized.
pub trait ContinuousProblem: Sync {
    fn dim(&self) -> usize;
    fn bounds(&self) -> &[(f64, f64)];
    /// Value at `x`, which lies inside the bounds. `rng` is the run's
    /// generator, for problems with a stochastic term.
    fn evaluate(&self, x: &[f64], rng: &mut dyn RngCore) -> f64;
}

impl ContinuousProblem for Benchmark {
    fn dim(&self) -> usize {
        self.dim
    }

    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64], rng: &mut dyn RngCore) -> f64 {
        self.value(x, rng)
    }
}

pub fn random_point<R: Rng + ?Sized>(bounds: &[(f64, f64)], rng: &mut R) -> Vec<f64> {
    bounds
        .iter()
        .map(|&(lo, hi)| if hi > lo { rng.random_range(lo..=hi) } else { lo })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuousConfig {
    pub population: usize,
    pub iterations: usize,
    pub replace_percent: f64,
    pub seed: u64,
    pub k: f64,
    pub bias: f64,
    pub eps0: f64,
    pub operators: OperatorConfig,
    pub target: Option<f64>,
}

impl Default for ContinuousConfig {
    fn default() -> Self {
        Self {
            population: 50,
            iterations: 25_000,
            replace_percent: 10.0,
            seed: 0,
            k: 2.0,
            bias: 0.001,
            eps0: 0.2,
            operators: OperatorConfig::default(),
            target: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContinuousOutcome {
    pub best_x: Vec<f64>,
    pub best_fitness: f64,
    pub trace: ConvergenceTrace,
    pub evaluations: u64,
    /// Contributor updates skipped because the previous fitness was zero.
    pub degenerate_updates: u64,
}

fn lbniv_err(e: LbnivError) -> EngineError {
    EngineError::Config(e.to_string())
}

fn bait_component<R: Rng + ?Sized>(
    case: BaitCase,
    j: usize,
    best: &[f64],
    donor: &[f64],
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> f64 {
    match case {
        BaitCase::Catch => best[j],
        BaitCase::MissCatch => donor[j],
        BaitCase::FalseCatch => {
            let (lo, hi) = bounds[j];
            if hi > lo {
                rng.random_range(lo..=hi)
            } else {
                lo
            }
        }
    }
}

fn fresh_agent<P: ContinuousProblem, R: Rng>(problem: &P, eps0: f64, rng: &mut R) -> ContinuousAgent {
    let x = random_point(problem.bounds(), rng);
    let fit = problem.evaluate(&x, rng);
    ContinuousAgent::new(x, fit, eps0)
}

pub fn optimize_continuous<P: ContinuousProblem>(
    problem: &P,
    cfg: &ContinuousConfig,
) -> Result<ContinuousOutcome, EngineError> {
    let dim = problem.dim();
    let params = LbnivParams {
        k: cfg.k,
        bias: cfg.bias,
        eps0: cfg.eps0,
        bounds: problem.bounds().to_vec(),
    };
    params.validate().map_err(lbniv_err)?;
    if params.bounds.len() != dim || dim == 0 {
        return Err(EngineError::Config("problem bounds do not match its dimension".into()));
    }
    if cfg.population == 0 || cfg.iterations == 0 {
        return Err(EngineError::Config("population and budget must be positive".into()));
    }
    if !(0.0..100.0).contains(&cfg.replace_percent) {
        return Err(EngineError::Config("replace percent must lie in [0, 100)".into()));
    }
    cfg.operators.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.population;
    let mut agents: Vec<ContinuousAgent> = (0..n).map(|_| fresh_agent(problem, cfg.eps0, &mut rng)).collect();
    let mut evaluations = n as u64;
    let mut degenerate = 0u64;
    let first = agents
        .iter()
        .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
        .expect("population is non-empty");
    let mut best_x = first.x.clone();
    let mut best_fitness = first.fitness;
    let mut trace = ConvergenceTrace::default();
    let reached = |f: f64| cfg.target.is_some_and(|t| f <= t);
    let replace_count = ((cfg.replace_percent * n as f64) / 100.0).floor() as usize;

    if reached(best_fitness) {
        trace.push(best_fitness, &[]);
    } else {
        for _ in 0..cfg.iterations {
            let snapshot: Vec<Vec<f64>> = agents.iter().map(|a| a.x.clone()).collect();
            let best_snapshot = best_x.clone();
            for i in 0..n {
                let rear = &snapshot[(i + n - 1) % n];
                let front = &snapshot[(i + 1) % n];
                let donor = &snapshot[rng.random_range(0..n)];
                let case = cfg.operators.sample_case(&mut rng);
                let window = cfg.operators.window(dim, &mut rng);

                let agent = &agents[i];
                let mut baited = agent.x.clone();
                let mut trial = agent.x.clone();
                let mut values = vec![0.0; dim];
                let position = change_of_position(window, |j| {
                    let v = bait_component(case, j, &best_snapshot, donor, &params.bounds, &mut rng);
                    values[j] = v;
                    trial[j] = v;
                    let f = problem.evaluate(&trial, &mut rng);
                    trial[j] = agent.x[j];
                    evaluations += 1;
                    f
                })?;
                baited[position] = values[position];

                let unclamped =
                    lbniv_update_from(&baited, agent, &best_snapshot, front, rear, &params).map_err(lbniv_err)?;
                let agent = &mut agents[i];
                let x_t = adapt_and_clamp(agent, &unclamped, &params);
                let j_t = problem.evaluate(&x_t, &mut rng);
                evaluations += 1;
                degenerate += update_contributors(agent, &x_t, j_t, front, rear) as u64;
                agent.prev_fitness = agent.fitness;
                if j_t < agent.fitness {
                    agent.x = x_t;
                    agent.fitness = j_t;
                }
                if agent.fitness < best_fitness {
                    best_fitness = agent.fitness;
                    best_x = agent.x.clone();
                }
            }

            if replace_count > 0 {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| agents[b].fitness.total_cmp(&agents[a].fitness));
                for &idx in order.iter().take(replace_count) {
                    agents[idx] = fresh_agent(problem, cfg.eps0, &mut rng);
                    evaluations += 1;
                    if agents[idx].fitness < best_fitness {
                        best_fitness = agents[idx].fitness;
                        best_x = agents[idx].x.clone();
                    }
                }
            }

            trace.push(best_fitness, &[]);
            if reached(best_fitness) {
                break;
            }
        }
    }

    Ok(ContinuousOutcome {
        best_x,
        best_fitness,
        trace,
        evaluations,
        degenerate_updates: degenerate,
    })
}
