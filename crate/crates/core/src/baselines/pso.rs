use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BaselineConfig, BaselineOutcome};
use crate::continuous::{random_point, ContinuousProblem};
use crate::engine::EngineError;
use crate::trace::ConvergenceTrace;

/// Global-best PSO with inertia, per-variable velocity limits and positions
/// clamped to the box.
pub fn run_pso<P: ContinuousProblem>(
    problem: &P,
    cfg: &BaselineConfig,
    seed: u64,
) -> Result<BaselineOutcome, EngineError> {
    cfg.validate()?;
    let bounds = problem.bounds();
    let dim = problem.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vmax: Vec<f64> = bounds.iter().map(|(lo, hi)| cfg.velocity_clamp * (hi - lo)).collect();

    let mut x: Vec<Vec<f64>> = (0..cfg.population).map(|_| random_point(bounds, &mut rng)).collect();
    let mut v = vec![vec![0.0; dim]; cfg.population];
    let mut fit: Vec<f64> = x.iter().map(|p| problem.evaluate(p, &mut rng)).collect();
    let mut evaluations = cfg.population as u64;
    let mut pbest = x.clone();
    let mut pbest_fit = fit.clone();
    let g = (0..cfg.population)
        .min_by(|&a, &b| fit[a].total_cmp(&fit[b]))
        .expect("population is non-empty");
    let mut gbest = x[g].clone();
    let mut gbest_fit = fit[g];
    let mut trace = ConvergenceTrace::default();

    for _ in 0..cfg.iterations {
        for i in 0..cfg.population {
            for j in 0..dim {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let vel = cfg.inertia * v[i][j]
                    + cfg.cognitive * r1 * (pbest[i][j] - x[i][j])
                    + cfg.social * r2 * (gbest[j] - x[i][j]);
                v[i][j] = vel.clamp(-vmax[j], vmax[j]);
                x[i][j] = (x[i][j] + v[i][j]).clamp(bounds[j].0, bounds[j].1);
            }
            fit[i] = problem.evaluate(&x[i], &mut rng);
            evaluations += 1;
            if fit[i] < pbest_fit[i] {
                pbest_fit[i] = fit[i];
                pbest[i].clone_from(&x[i]);
            }
        }
        for i in 0..cfg.population {
            if pbest_fit[i] < gbest_fit {
                gbest_fit = pbest_fit[i];
                gbest.clone_from(&pbest[i]);
            }
        }
        trace.push(gbest_fit, &[]);
        if cfg.target.is_some_and(|t| gbest_fit <= t) {
            break;
        }
    }

    Ok(BaselineOutcome {
        best_x: gbest,
        best_fitness: gbest_fit,
        trace,
        evaluations,
    })
}
