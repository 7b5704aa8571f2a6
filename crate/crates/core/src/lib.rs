//! Green heron swarm optimization for discrete and continuous problems.
//!
//! The discrete engine ([`engine::optimize`]) works on event strings and
//! covers TSP, QAP, multi-constraint knapsack and road-network paths. The
//! continuous engine ([`continuous::optimize_continuous`]) combines baiting
//! with location based neighbour influenced variation ([`lbniv`]).

// Validation writes `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod continuous;
pub mod engine;
pub mod harness;
pub mod ingest;
pub mod lbniv;
pub mod operators;
pub mod oracles;
pub mod problems;
pub mod sequence;
pub mod trace;

pub use continuous::{optimize_continuous, ContinuousConfig, ContinuousOutcome, ContinuousProblem};
pub use engine::{optimize, Agent, DiscreteProblem, EngineConfig, EngineError, Outcome, RotationScope};
pub use harness::{
    run_experiment, Algorithm, ExperimentConfig, ExperimentResult, HarnessError, ProblemSpec, ReportFormat, RunStats,
};
pub use lbniv::{ContinuousAgent, LbnivParams};
pub use operators::{BaitCase, OperatorConfig, OperatorError, SecondaryMethod};
pub use problems::{
    Benchmark, BenchmarkId, KnapsackInstance, KnapsackProblem, Metric, ProblemError, QapInstance, RoadNetwork, Sense,
    ThresholdPolicy, TspInstance,
};
pub use sequence::{EventSequence, SequenceKind};
pub use trace::ConvergenceTrace;
