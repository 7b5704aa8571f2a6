//! Problem adapters: objective evaluation, encodings and validity rules.

pub mod benchmark;
pub mod knapsack;
pub mod qap;
pub mod road;
pub mod tsp;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use benchmark::{Benchmark, BenchmarkId};
pub use knapsack::{knapsack_decode, knapsack_profit, KnapsackInstance, KnapsackProblem, ThresholdPolicy};
pub use qap::{qap_cost, QapInstance};
pub use road::{road_fitness, RoadCost, RoadEdge, RoadNetwork};
pub use tsp::{tsp_tour_length, Metric, TspInstance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("tour is not a permutation of the {n} cities")]
    InvalidTour { n: usize },
    #[error("assignment is not a permutation of {n} facilities")]
    InvalidPermutation { n: usize },
    #[error("threshold {threshold} outside [1, {n}]")]
    ThresholdOutOfRange { threshold: usize, n: usize },
    #[error("no edge from node {from} to node {to}")]
    DisconnectedPath { from: usize, to: usize },
    #[error("path must run from node {origin} to node {destination}")]
    WrongEndpoints { origin: usize, destination: usize },
    #[error("component {index} = {value} lies outside [{lo}, {hi}]")]
    OutOfBounds { index: usize, value: f64, lo: f64, hi: f64 },
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

/// Optimization direction of an objective as reported to users.
///
/// The engines always minimize; maximization problems hand them the negated
/// objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Converts an internal (minimized) fitness into the reported objective.
    pub fn to_objective(self, fitness: f64) -> f64 {
        match self {
            Sense::Minimize => fitness,
            Sense::Maximize => -fitness,
        }
    }

    pub fn to_fitness(self, objective: f64) -> f64 {
        self.to_objective(objective)
    }

    /// True when `a` is strictly better than `b` in this sense.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }
}
