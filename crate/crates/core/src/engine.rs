//! Population-based discrete engine.
//!
//! Every iteration each agent proposes one candidate string built by the
//! operator pipeline (baiting set-up, change of position, an occasional
//! prey-swarm rotation, then the completed baiting move). The candidate
//! replaces the agent only if it is better. After all agents have moved the
//! worst `X%` are re-initialized at random.

use std::ops::Range;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operators::{
    attracting_prey_swarms, baiting, change_of_position, secondary_fitness_linkage, secondary_fitness_segments,
    BaitCase, BaitSelector, OperatorConfig, OperatorError, SecondaryMethod,
};
use crate::problems::ProblemError;
use crate::sequence::{EventSequence, SequenceKind};
use crate::trace::ConvergenceTrace;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid engine configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Which part of a string attracting prey swarms may rotate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationScope {
    Whole,
    /// A random contiguous sub-range of at least two positions.
    SubRange,
    Disabled,
}

/// A problem the discrete engine can optimize. Fitness is minimized.
pub trait DiscreteProblem: Sync {
    fn kind(&self) -> SequenceKind {
        SequenceKind::Permutation
    }

    /// Number of events in the universe baits are drawn from.
    fn universe(&self) -> usize;

    fn random_sequence<R: Rng + ?Sized>(&self, rng: &mut R) -> EventSequence {
        let mut v: Vec<usize> = (0..self.universe()).collect();
        v.shuffle(rng);
        EventSequence::new(v)
    }

    fn evaluate(&self, seq: &EventSequence, threshold: usize) -> Result<f64, ProblemError>;

    /// Local cost of applying `case` with `bait` at `position`, used by change
    /// of position. Only differences between positions matter.
    fn move_cost(&self, seq: &EventSequence, threshold: usize, bait: usize, position: usize, case: BaitCase) -> f64 {
        baiting(seq, self.kind(), self.universe(), bait, position, case)
            .ok()
            .and_then(|s| self.evaluate(&s, threshold).ok())
            .unwrap_or(f64::INFINITY)
    }

    fn rotation_scope(&self) -> RotationScope {
        RotationScope::Whole
    }

    /// Adjacency predicate for secondary fitness.
    fn linked(&self, _a: usize, _b: usize) -> bool {
        true
    }

    fn cyclic(&self) -> bool {
        false
    }

    /// False when every complete string is equally linked, so the secondary
    /// fitness carries no information (TSP, QAP, knapsack).
    fn secondary_applicable(&self) -> bool {
        false
    }

    fn initial_threshold<R: Rng + ?Sized>(&self, _rng: &mut R) -> usize {
        0
    }

    fn vary_threshold<R: Rng + ?Sized>(&self, current: usize, _rng: &mut R) -> usize {
        current
    }

    fn component_names(&self) -> &'static [&'static str] {
        &[]
    }

    fn components(&self, _seq: &EventSequence, _threshold: usize) -> Vec<f64> {
        Vec::new()
    }
}

/// One candidate solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub sequence: EventSequence,
    /// Decoding threshold for problems that use one; 0 otherwise.
    pub threshold: usize,
    pub fitness: f64,
    pub secondary: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub population: usize,
    /// Percentage `X` of worst agents re-initialized after each iteration.
    pub replace_percent: f64,
    pub iterations: usize,
    pub seed: u64,
    pub operators: OperatorConfig,
    /// Stop early once the global best fitness is at or below this value.
    pub target: Option<f64>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            population: 50,
            replace_percent: 10.0,
            iterations: 25_000,
            seed: 0,
            operators: OperatorConfig::default(),
            target: None,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.population == 0 {
            return Err(EngineError::Config("population must be at least 1".into()));
        }
        if self.iterations == 0 {
            return Err(EngineError::Config("budget must be at least 1 iteration".into()));
        }
        if !(0.0..100.0).contains(&self.replace_percent) {
            return Err(EngineError::Config("replace percent must lie in [0, 100)".into()));
        }
        self.operators.validate()?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct PopulationState {
    pub agents: Vec<Agent>,
    pub global_best: Agent,
    pub iteration: usize,
    pub rng_seed: u64,
}

impl PopulationState {
    /// Re-checks the population against the global best.
    fn absorb_population_best(&mut self) {
        if let Some(best) = self.agents.iter().min_by(|a, b| a.fitness.total_cmp(&b.fitness)) {
            if best.fitness < self.global_best.fitness {
                self.global_best = best.clone();
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub best: Agent,
    pub trace: ConvergenceTrace,
    pub evaluations: u64,
}

fn secondary_of<P: DiscreteProblem>(problem: &P, method: SecondaryMethod, seq: &EventSequence) -> f64 {
    if !problem.secondary_applicable() {
        return 0.0;
    }
    let linked = |a, b| problem.linked(a, b);
    match method {
        SecondaryMethod::NodeLinkage => secondary_fitness_linkage(seq, problem.cyclic(), linked),
        SecondaryMethod::SegmentCount => secondary_fitness_segments(seq, problem.cyclic(), linked) as f64,
    }
}

fn secondary_better(method: SecondaryMethod, a: f64, b: f64) -> bool {
    match method {
        SecondaryMethod::NodeLinkage => a > b,
        SecondaryMethod::SegmentCount => a < b,
    }
}

/// Strictly-better test used for acceptance: lower fitness, or equal fitness
/// with a better secondary score.
pub fn is_better(method: SecondaryMethod, cand: &Agent, current: &Agent) -> bool {
    cand.fitness < current.fitness
        || (cand.fitness == current.fitness && secondary_better(method, cand.secondary, current.secondary))
}

pub fn random_agent<P: DiscreteProblem, R: Rng + ?Sized>(
    problem: &P,
    method: SecondaryMethod,
    rng: &mut R,
) -> Result<Agent, EngineError> {
    let sequence = problem.random_sequence(rng);
    let threshold = problem.initial_threshold(rng);
    let fitness = problem.evaluate(&sequence, threshold)?;
    let secondary = secondary_of(problem, method, &sequence);
    Ok(Agent {
        sequence,
        threshold,
        fitness,
        secondary,
    })
}

/// Builds a random population and records its best member.
pub fn initialize<P: DiscreteProblem, R: Rng + ?Sized>(
    problem: &P,
    cfg: &EngineConfig,
    rng: &mut R,
) -> Result<PopulationState, EngineError> {
    let method = cfg.operators.secondary_method;
    let agents = (0..cfg.population)
        .map(|_| random_agent(problem, method, rng))
        .collect::<Result<Vec<_>, _>>()?;
    let global_best = agents
        .iter()
        .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
        .cloned()
        .expect("population is non-empty");
    Ok(PopulationState {
        agents,
        global_best,
        iteration: 0,
        rng_seed: cfg.seed,
    })
}

/// Replaces the `floor(percent * N / 100)` worst agents by fresh random
/// ones. The global best record is left alone. Returns the number replaced.
pub fn replace_worst<P: DiscreteProblem, R: Rng + ?Sized>(
    state: &mut PopulationState,
    percent: f64,
    problem: &P,
    method: SecondaryMethod,
    rng: &mut R,
) -> Result<usize, EngineError> {
    let n = state.agents.len();
    let count = ((percent * n as f64) / 100.0).floor() as usize;
    if count == 0 {
        return Ok(0);
    }
    let mut order: Vec<usize> = (0..n).collect();
    // Worst first; the stable sort keeps lower indices first among ties.
    order.sort_by(|&a, &b| state.agents[b].fitness.total_cmp(&state.agents[a].fitness));
    for &idx in order.iter().take(count) {
        state.agents[idx] = random_agent(problem, method, rng)?;
    }
    Ok(count)
}

fn rotation_segment<R: Rng + ?Sized>(scope: RotationScope, len: usize, rng: &mut R) -> Option<Range<usize>> {
    if len < 2 {
        return None;
    }
    match scope {
        RotationScope::Disabled => None,
        RotationScope::Whole => Some(0..len),
        RotationScope::SubRange => {
            let start = rng.random_range(0..len - 1);
            let end = rng.random_range(start + 2..=len);
            Some(start..end)
        }
    }
}

/// Runs the operator pipeline once for `agent` and returns the candidate
/// string and threshold (not yet evaluated).
pub fn propose<P: DiscreteProblem, R: Rng + ?Sized>(
    problem: &P,
    agent: &Agent,
    ops: &OperatorConfig,
    baits: &mut BaitSelector,
    rng: &mut R,
) -> Result<(EventSequence, usize), EngineError> {
    let threshold = problem.vary_threshold(agent.threshold, rng);
    let seq = &agent.sequence;
    let len = seq.len();
    if len == 0 {
        return Ok((seq.clone(), threshold));
    }

    // Baiting: hold a bait and decide how it will be applied.
    let bait = baits.draw(rng);
    let case = ops.sample_case(rng);

    // Change of position: best application point inside the window.
    let window = ops.window(len, rng);
    let position = change_of_position(window, |p| problem.move_cost(seq, threshold, bait, p, case))?;

    // Attracting prey swarms: occasionally rotate a segment under the bait.
    let mut current = None;
    if rng.random::<f64>() < ops.p_attract {
        if let Some(segment) = rotation_segment(problem.rotation_scope(), len, rng) {
            if let Some(shift) = ops.sample_shift(segment.len(), rng) {
                current = Some(attracting_prey_swarms(seq, position, shift, segment)?);
            }
        }
    }

    // Complete the baiting move at the chosen position.
    let base = current.as_ref().unwrap_or(seq);
    let out = baiting(base, problem.kind(), problem.universe(), bait, position, case)?;
    Ok((out, threshold))
}

/// Runs the full engine and returns the global best with its trace.
///
/// The trace holds one global-best fitness per completed iteration. The run
/// is a pure function of `(problem, cfg)`.
pub fn optimize<P: DiscreteProblem>(problem: &P, cfg: &EngineConfig) -> Result<Outcome, EngineError> {
    cfg.validate()?;
    let method = cfg.operators.secondary_method;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = initialize(problem, cfg, &mut rng)?;
    let mut evaluations = cfg.population as u64;
    let mut baits = BaitSelector::new(problem.universe().max(1));
    let mut trace = ConvergenceTrace::with_components(problem.component_names());
    let mut best_components = problem.components(&state.global_best.sequence, state.global_best.threshold);

    let reached = |f: f64| cfg.target.is_some_and(|t| f <= t);
    if reached(state.global_best.fitness) {
        trace.push(state.global_best.fitness, &best_components);
        return Ok(Outcome {
            best: state.global_best,
            trace,
            evaluations,
        });
    }

    for iteration in 0..cfg.iterations {
        state.iteration = iteration + 1;
        for i in 0..state.agents.len() {
            let (sequence, threshold) = propose(problem, &state.agents[i], &cfg.operators, &mut baits, &mut rng)?;
            let fitness = problem.evaluate(&sequence, threshold)?;
            evaluations += 1;
            let secondary = secondary_of(problem, method, &sequence);
            let cand = Agent {
                sequence,
                threshold,
                fitness,
                secondary,
            };
            if is_better(method, &cand, &state.agents[i]) {
                state.agents[i] = cand;
            }
        }

        let before = state.global_best.fitness;
        state.absorb_population_best();
        replace_worst(&mut state, cfg.replace_percent, problem, method, &mut rng)?;
        evaluations += ((cfg.replace_percent * cfg.population as f64) / 100.0).floor() as u64;
        state.absorb_population_best();
        if state.global_best.fitness < before {
            best_components = problem.components(&state.global_best.sequence, state.global_best.threshold);
        }

        trace.push(state.global_best.fitness, &best_components);
        if reached(state.global_best.fitness) {
            break;
        }
    }

    Ok(Outcome {
        best: state.global_best,
        trace,
        evaluations,
    })
}
