use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{BaselineConfig, BaselineOutcome};
use crate::continuous::{random_point, ContinuousProblem};
use crate::engine::EngineError;
use crate::trace::ConvergenceTrace;

fn tournament<R: Rng>(fit: &[f64], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..fit.len());
    for _ in 1..size {
        let c = rng.random_range(0..fit.len());
        if fit[c] < fit[best] {
            best = c;
        }
    }
    best
}

/// Generational real-coded GA: tournament selection, BLX-0.5 crossover,
/// Gaussian mutation and elitism.
pub fn run_ga<P: ContinuousProblem>(
    problem: &P,
    cfg: &BaselineConfig,
    seed: u64,
) -> Result<BaselineOutcome, EngineError> {
    cfg.validate()?;
    let bounds = problem.bounds();
    let dim = problem.dim();
    let n = cfg.population;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pm = cfg.mutation_rate.unwrap_or(1.0 / dim as f64);
    let noise = Normal::new(0.0, 1.0).expect("unit normal");

    let mut pop: Vec<Vec<f64>> = (0..n).map(|_| random_point(bounds, &mut rng)).collect();
    let mut fit: Vec<f64> = pop.iter().map(|p| problem.evaluate(p, &mut rng)).collect();
    let mut evaluations = n as u64;
    let b = (0..n)
        .min_by(|&a, &b| fit[a].total_cmp(&fit[b]))
        .expect("population is non-empty");
    let mut best_x = pop[b].clone();
    let mut best_fit = fit[b];
    let mut trace = ConvergenceTrace::default();

    for _ in 0..cfg.iterations {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| fit[a].total_cmp(&fit[b]));
        let mut next: Vec<Vec<f64>> = order.iter().take(cfg.elites).map(|&i| pop[i].clone()).collect();
        let mut next_fit: Vec<f64> = order.iter().take(cfg.elites).map(|&i| fit[i]).collect();

        while next.len() < n {
            let i1 = tournament(&fit, cfg.tournament, &mut rng);
            let p1 = &pop[i1];
            let p2 = &pop[tournament(&fit, cfg.tournament, &mut rng)];
            let mut child = p1.clone();
            let crossed = rng.random::<f64>() < cfg.crossover_rate;
            if crossed {
                for j in 0..dim {
                    let (lo, hi) = (p1[j].min(p2[j]), p1[j].max(p2[j]));
                    let span = 0.5 * (hi - lo);
                    let v = if hi - lo > 0.0 {
                        rng.random_range(lo - span..=hi + span)
                    } else {
                        lo
                    };
                    child[j] = v.clamp(bounds[j].0, bounds[j].1);
                }
            }
            let mut mutated = false;
            for j in 0..dim {
                if rng.random::<f64>() < pm {
                    let sigma = cfg.mutation_scale * (bounds[j].1 - bounds[j].0);
                    child[j] = (child[j] + sigma * noise.sample(&mut rng)).clamp(bounds[j].0, bounds[j].1);
                    mutated = true;
                }
            }
            let f = if crossed || mutated {
                evaluations += 1;
                problem.evaluate(&child, &mut rng)
            } else {
                fit[i1]
            };
            next.push(child);
            next_fit.push(f);
        }
        pop = next;
        fit = next_fit;
        for i in 0..n {
            if fit[i] < best_fit {
                best_fit = fit[i];
                best_x.clone_from(&pop[i]);
            }
        }
        trace.push(best_fit, &[]);
        if cfg.target.is_some_and(|t| best_fit <= t) {
            break;
        }
    }

    Ok(BaselineOutcome {
        best_x,
        best_fitness: best_fit,
        trace,
        evaluations,
    })
}
