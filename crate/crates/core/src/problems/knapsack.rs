use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProblemError;
use crate::engine::{DiscreteProblem, RotationScope};
use crate::sequence::EventSequence;

/// Multi-constraint 0/1 knapsack instance.
///
/// Profits, weights and capacities are stored as reals so that instances
/// with fractional values load without loss.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub profit: Vec<f64>,
    /// `m` rows of `n` weights.
    pub weight: Vec<Vec<f64>>,
    pub capacity: Vec<f64>,
    pub best_known: Option<f64>,
}

impl KnapsackInstance {
    pub fn new(
        name: impl Into<String>,
        profit: Vec<f64>,
        weight: Vec<Vec<f64>>,
        capacity: Vec<f64>,
    ) -> Result<Self, ProblemError> {
        let n = profit.len();
        let m = capacity.len();
        if weight.len() != m {
            return Err(ProblemError::DimensionMismatch {
                expected: m,
                got: weight.len(),
            });
        }
        if let Some(row) = weight.iter().find(|r| r.len() != n) {
            return Err(ProblemError::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        if profit.iter().chain(&capacity).any(|v| !(*v >= 0.0)) {
            return Err(ProblemError::InvalidInstance(
                "profits and capacities must be non-negative".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            n,
            m,
            profit,
            weight,
            capacity,
            best_known: None,
        })
    }

    pub fn with_best_known(mut self, value: Option<f64>) -> Self {
        self.best_known = value;
        self
    }

    pub fn is_feasible(&self, bits: &[bool]) -> bool {
        self.weight.iter().zip(&self.capacity).all(|(row, &cap)| {
            let load: f64 = row.iter().zip(bits).filter(|(_, &b)| b).map(|(w, _)| w).sum();
            load <= cap
        })
    }
}

/// Bit `i` is set iff the one-based event at index `i` exceeds `threshold`.
pub fn knapsack_decode(seq: &EventSequence, threshold: usize) -> Result<Vec<bool>, ProblemError> {
    let n = seq.len();
    if threshold < 1 || threshold > n {
        return Err(ProblemError::ThresholdOutOfRange { threshold, n });
    }
    Ok(seq.as_slice().iter().map(|&e| e + 1 > threshold).collect())
}

/// Total profit of the selection, or 0 if any capacity is exceeded.
pub fn knapsack_profit(inst: &KnapsackInstance, bits: &[bool]) -> f64 {
    if !inst.is_feasible(bits) {
        return 0.0;
    }
    inst.profit.iter().zip(bits).filter(|(_, &b)| b).map(|(p, _)| p).sum()
}

/// How an agent's decoding threshold evolves between proposals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdPolicy {
    /// Draw a fresh threshold in `[1, n]` for every proposal.
    Resample,
    /// Step the threshold by -1, 0 or +1, clamped to `[1, n]`.
    Walk,
    /// Every agent uses the same threshold.
    Fixed(usize),
}

impl std::str::FromStr for ThresholdPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "resample" => Ok(Self::Resample),
            "walk" => Ok(Self::Walk),
            _ => s
                .strip_prefix("fixed:")
                .and_then(|v| v.parse().ok())
                .map(Self::Fixed)
                .ok_or_else(|| format!("unknown threshold policy `{s}` (resample, walk, fixed:<t>)")),
        }
    }
}

/// Knapsack instance paired with a threshold policy, ready for the engine.
///
/// Fitness is the negated profit so that lower is better.
#[derive(Clone, Debug)]
pub struct KnapsackProblem {
    pub instance: KnapsackInstance,
    pub policy: ThresholdPolicy,
}

impl KnapsackProblem {
    pub fn new(instance: KnapsackInstance, policy: ThresholdPolicy) -> Result<Self, ProblemError> {
        if let ThresholdPolicy::Fixed(t) = policy {
            if t < 1 || t > instance.n {
                return Err(ProblemError::ThresholdOutOfRange {
                    threshold: t,
                    n: instance.n,
                });
            }
        }
        Ok(Self { instance, policy })
    }

    pub fn profit_of(&self, seq: &EventSequence, threshold: usize) -> Result<f64, ProblemError> {
        if !seq.is_permutation_of(self.instance.n) {
            return Err(ProblemError::InvalidPermutation { n: self.instance.n });
        }
        let bits = knapsack_decode(seq, threshold)?;
        Ok(knapsack_profit(&self.instance, &bits))
    }
}

impl DiscreteProblem for KnapsackProblem {
    fn universe(&self) -> usize {
        self.instance.n
    }

    fn evaluate(&self, seq: &EventSequence, threshold: usize) -> Result<f64, ProblemError> {
        self.profit_of(seq, threshold).map(|p| -p)
    }

    fn rotation_scope(&self) -> RotationScope {
        RotationScope::Whole
    }

    fn initial_threshold<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self.policy {
            ThresholdPolicy::Fixed(t) => t,
            _ => rng.random_range(1..=self.instance.n),
        }
    }

    fn vary_threshold<R: Rng + ?Sized>(&self, current: usize, rng: &mut R) -> usize {
        let n = self.instance.n;
        match self.policy {
            ThresholdPolicy::Fixed(t) => t,
            ThresholdPolicy::Resample => rng.random_range(1..=n),
            ThresholdPolicy::Walk => match rng.random_range(0..4u8) {
                0 => current.saturating_sub(1).max(1),
                1 => (current + 1).min(n),
                _ => current,
            },
        }
    }
}
