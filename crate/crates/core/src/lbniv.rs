//! Location based neighbour influenced variation for real vectors.
//!
//! Each variable moves by the distance between the global best and the two
//! ring neighbours, scaled by a per-variable contributor `d` and an adaptive
//! step `eps`, plus a constant bias:
//!
//! `x_t = x_{t-1} + |best - rear| * d_r * eps + |best - front| * d_f * eps + bias`
//!
//! `d` follows the relative fitness change since the last iteration and
//! `eps` shrinks or grows by `k` whenever an update leaves the box.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LbnivError {
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LbnivParams {
    /// Step scale factor, greater than 1.
    pub k: f64,
    pub bias: f64,
    /// Initial step scale.
    pub eps0: f64,
    pub bounds: Vec<(f64, f64)>,
}

impl LbnivParams {
    pub fn new(bounds: Vec<(f64, f64)>) -> Self {
        Self {
            k: 2.0,
            bias: 0.001,
            eps0: 0.2,
            bounds,
        }
    }

    pub fn validate(&self) -> Result<(), LbnivError> {
        if !(self.k > 1.0) {
            return Err(LbnivError::InvalidParams(format!("k = {} must exceed 1", self.k)));
        }
        if !(self.eps0 > 0.0) {
            return Err(LbnivError::InvalidParams(format!(
                "eps0 = {} must be positive",
                self.eps0
            )));
        }
        if !self.bias.is_finite() {
            return Err(LbnivError::InvalidParams("bias must be finite".into()));
        }
        if self.bounds.iter().any(|&(lo, hi)| !(lo <= hi)) {
            return Err(LbnivError::InvalidParams("bounds need min <= max".into()));
        }
        Ok(())
    }
}

/// Per-agent state of the continuous search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuousAgent {
    pub x: Vec<f64>,
    /// Current fitness `J_t`.
    pub fitness: f64,
    /// Fitness one iteration earlier, `J_{t-1}`.
    pub prev_fitness: f64,
    /// Contributor for the rear neighbour term.
    pub d_rear: Vec<f64>,
    /// Contributor for the front neighbour term.
    pub d_front: Vec<f64>,
    /// Adaptive step scale, shared by both neighbour terms of a variable.
    pub eps: Vec<f64>,
}

impl ContinuousAgent {
    /// Fresh agent: `d = 0` and `eps = eps0` in every component.
    pub fn new(x: Vec<f64>, fitness: f64, eps0: f64) -> Self {
        let d = x.len();
        Self {
            x,
            fitness,
            prev_fitness: fitness,
            d_rear: vec![0.0; d],
            d_front: vec![0.0; d],
            eps: vec![eps0; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Result of the contributor update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DUpdate {
    pub value: f64,
    /// Set when `|J_prev|` was too small to divide by; `value` is then 0.
    pub degenerate: bool,
}

/// `(J_prev - J_t) / |J_prev|` if `x_t >= x_prev`, otherwise its negation.
pub fn update_d(j_t: f64, j_prev: f64, x_t: f64, x_prev: f64) -> DUpdate {
    if !(j_prev.abs() >= f64::EPSILON) {
        return DUpdate {
            value: 0.0,
            degenerate: true,
        };
    }
    let rel = (j_prev - j_t) / j_prev.abs();
    let value = if x_t >= x_prev { rel } else { -rel };
    DUpdate {
        value,
        degenerate: false,
    }
}

/// `eps / k` above the upper bound, `eps * k` below the lower bound.
pub fn update_epsilon(eps: f64, x_t: f64, bounds: (f64, f64), k: f64) -> f64 {
    if x_t > bounds.1 {
        eps / k
    } else if x_t < bounds.0 {
        eps * k
    } else {
        eps
    }
}

pub fn clamp_to_bounds(x: &[f64], bounds: &[(f64, f64)]) -> Vec<f64> {
    x.iter().zip(bounds).map(|(&v, &(lo, hi))| v.clamp(lo, hi)).collect()
}

fn check_dim(expected: usize, got: usize) -> Result<(), LbnivError> {
    if expected == got {
        Ok(())
    } else {
        Err(LbnivError::DimensionMismatch { expected, got })
    }
}

/// Unclamped variation of `agent.x`.
pub fn lbniv_update(
    agent: &ContinuousAgent,
    best: &[f64],
    front: &[f64],
    rear: &[f64],
    params: &LbnivParams,
) -> Result<Vec<f64>, LbnivError> {
    lbniv_update_from(&agent.x, agent, best, front, rear, params)
}

/// Same as [`lbniv_update`] but starting from `base` instead of `agent.x`,
/// using the agent's contributors and step scales.
pub fn lbniv_update_from(
    base: &[f64],
    agent: &ContinuousAgent,
    best: &[f64],
    front: &[f64],
    rear: &[f64],
    params: &LbnivParams,
) -> Result<Vec<f64>, LbnivError> {
    let dim = agent.dim();
    for got in [
        base.len(),
        best.len(),
        front.len(),
        rear.len(),
        agent.d_rear.len(),
        agent.d_front.len(),
        agent.eps.len(),
    ] {
        check_dim(dim, got)?;
    }
    Ok((0..dim)
        .map(|j| {
            base[j]
                + (best[j] - rear[j]).abs() * agent.d_rear[j] * agent.eps[j]
                + (best[j] - front[j]).abs() * agent.d_front[j] * agent.eps[j]
                + params.bias
        })
        .collect())
}

/// Applies the step-scale rule to the unclamped `x_t` and returns the
/// clamped vector.
pub fn adapt_and_clamp(agent: &mut ContinuousAgent, x_t: &[f64], params: &LbnivParams) -> Vec<f64> {
    for ((eps, &v), &b) in agent.eps.iter_mut().zip(x_t).zip(&params.bounds) {
        *eps = update_epsilon(*eps, v, b, params.k);
    }
    clamp_to_bounds(x_t, &params.bounds)
}

/// Updates both contributors from the outcome `(x_t, J_t)`, taking each
/// neighbour's coordinate as the reference for the branch test. Returns the
/// number of degenerate updates.
pub fn update_contributors(agent: &mut ContinuousAgent, x_t: &[f64], j_t: f64, front: &[f64], rear: &[f64]) -> usize {
    let j_prev = agent.fitness;
    let mut degenerate = 0;
    for j in 0..agent.dim() {
        let r = update_d(j_t, j_prev, x_t[j], rear[j]);
        let f = update_d(j_t, j_prev, x_t[j], front[j]);
        agent.d_rear[j] = r.value;
        agent.d_front[j] = f.value;
        degenerate += usize::from(r.degenerate) + usize::from(f.degenerate);
    }
    degenerate
}
