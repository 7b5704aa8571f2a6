//! Reference real-coded GA and global-best PSO.

mod ga;
mod pso;

use serde::{Deserialize, Serialize};

use crate::continuous::ContinuousProblem;
use crate::engine::EngineError;
use crate::trace::ConvergenceTrace;

pub use ga::run_ga;
pub use pso::run_pso;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaselineAlgorithm {
    Ga,
    Pso,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub algorithm: BaselineAlgorithm,
    pub population: usize,
    pub iterations: usize,
    pub target: Option<f64>,
    pub tournament: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means `1 / D`.
    pub mutation_rate: Option<f64>,
    /// Mutation standard deviation as a fraction of each variable's range.
    pub mutation_scale: f64,
    pub elites: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity limit as a fraction of each variable's range.
    pub velocity_clamp: f64,
}

impl BaselineConfig {
    pub fn new(algorithm: BaselineAlgorithm) -> Self {
        Self {
            algorithm,
            population: 50,
            iterations: 25_000,
            target: None,
            tournament: 2,
            crossover_rate: 0.9,
            mutation_rate: None,
            mutation_scale: 0.1,
            elites: 1,
            inertia: 0.72,
            cognitive: 1.49,
            social: 1.49,
            velocity_clamp: 0.2,
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let fail = |m: &str| Err(EngineError::Config(m.to_string()));
        if self.population == 0 || self.iterations == 0 {
            return fail("population and budget must be at least 1");
        }
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.crossover_rate) || !self.mutation_rate.map_or(true, unit) {
            return fail("crossover and mutation rates must lie in [0, 1]");
        }
        if !unit(self.inertia) || !unit(self.velocity_clamp) {
            return fail("inertia and velocity clamp must lie in [0, 1]");
        }
        if self.cognitive < 0.0 || self.social < 0.0 || self.mutation_scale < 0.0 {
            return fail("coefficients must be non-negative");
        }
        if self.tournament == 0 || self.elites > self.population {
            return fail("tournament size must be positive and elites at most the population");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BaselineOutcome {
    pub best_x: Vec<f64>,
    pub best_fitness: f64,
    pub trace: ConvergenceTrace,
    pub evaluations: u64,
}

/// Dispatches on `cfg.algorithm`.
pub fn run_baseline<P: ContinuousProblem>(
    problem: &P,
    cfg: &BaselineConfig,
    seed: u64,
) -> Result<BaselineOutcome, EngineError> {
    match cfg.algorithm {
        BaselineAlgorithm::Ga => run_ga(problem, cfg, seed),
        BaselineAlgorithm::Pso => run_pso(problem, cfg, seed),
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use rand::RngCore;

    use crate::continuous::ContinuousProblem;

    pub struct Constant;

    impl ContinuousProblem for Constant {
        fn dim(&self) -> usize {
            2
        }
        fn bounds(&self) -> &[(f64, f64)] {
            &[(-1.0, 1.0), (-1.0, 1.0)]
        }
        fn evaluate(&self, _: &[f64], _: &mut dyn RngCore) -> f64 {
            7.0
        }
    }
}
