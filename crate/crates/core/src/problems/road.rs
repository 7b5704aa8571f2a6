use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProblemError;
use crate::engine::{DiscreteProblem, RotationScope};
use crate::sequence::{EventSequence, SequenceKind};

/// Penalty per missing link used when ranking partial paths.
const BROKEN_LINK: f64 = 1e9;

/// Directed road segment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoadEdge {
    pub from: usize,
    pub to: usize,
    pub distance: f64,
    pub awt: f64,
    /// Additive resource consumption, one entry per cap.
    #[serde(default)]
    pub resources: Vec<f64>,
}

/// Travel part `f1`, waiting part `f2` and their sum `f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoadCost {
    pub f1: f64,
    pub f2: f64,
    pub f: f64,
}

/// Directed road graph with a fixed source and destination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoadNetwork {
    pub name: String,
    /// Node labels; node `i` is `labels[i]`.
    pub labels: Vec<String>,
    pub edges: Vec<RoadEdge>,
    pub velocity: f64,
    pub source: usize,
    pub destination: usize,
    /// Per-resource upper bounds on the path total. Empty means unconstrained.
    pub caps: Vec<f64>,
    /// For each ordered node pair, the index of the cheapest edge.
    #[serde(skip)]
    best_edge: Vec<Option<usize>>,
    #[serde(skip)]
    out: Vec<Vec<usize>>,
}

impl RoadNetwork {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        edges: Vec<RoadEdge>,
        velocity: f64,
        source: usize,
        destination: usize,
        caps: Vec<f64>,
    ) -> Result<Self, ProblemError> {
        let n = labels.len();
        if !(velocity > 0.0) {
            return Err(ProblemError::InvalidInstance("velocity must be positive".into()));
        }
        if source >= n || destination >= n || source == destination {
            return Err(ProblemError::InvalidInstance(
                "source and destination must be distinct nodes".into(),
            ));
        }
        for e in &edges {
            if e.from >= n || e.to >= n {
                return Err(ProblemError::InvalidInstance(format!(
                    "edge {} -> {} references an unknown node",
                    e.from, e.to
                )));
            }
            if !(e.distance >= 0.0 && e.awt >= 0.0) {
                return Err(ProblemError::InvalidInstance(
                    "edge weights must be non-negative".into(),
                ));
            }
            if e.resources.len() != caps.len() {
                return Err(ProblemError::DimensionMismatch {
                    expected: caps.len(),
                    got: e.resources.len(),
                });
            }
        }
        let mut net = Self {
            name: name.into(),
            labels,
            edges,
            velocity,
            source,
            destination,
            caps,
            best_edge: Vec::new(),
            out: Vec::new(),
        };
        net.index();
        Ok(net)
    }

    fn index(&mut self) {
        let n = self.labels.len();
        self.best_edge = vec![None; n * n];
        self.out = vec![Vec::new(); n];
        for (k, e) in self.edges.iter().enumerate() {
            let cost = self.edge_cost(e);
            let slot = e.from * n + e.to;
            match self.best_edge[slot] {
                Some(j) if self.edge_cost(&self.edges[j]) <= cost => {}
                _ => self.best_edge[slot] = Some(k),
            }
        }
        for u in 0..n {
            for v in 0..n {
                if self.best_edge[u * n + v].is_some() {
                    self.out[u].push(v);
                }
            }
        }
    }

    /// Rebuilds lookup tables after deserialization.
    pub fn reindexed(mut self) -> Self {
        self.index();
        self
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_cost(&self, e: &RoadEdge) -> f64 {
        e.distance / self.velocity + e.awt
    }

    /// The edge used between `u` and `v` (the cheapest when parallel).
    pub fn edge(&self, u: usize, v: usize) -> Option<&RoadEdge> {
        let n = self.node_count();
        if u >= n || v >= n {
            return None;
        }
        self.best_edge[u * n + v].map(|k| &self.edges[k])
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    /// A copy whose waiting times are scaled by seeded factors drawn
    /// uniformly from `[1 - amplitude, 1 + amplitude]`, modelling other
    /// traffic.
    pub fn with_awt_noise(&self, amplitude: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = self.clone();
        for e in &mut out.edges {
            let factor = 1.0 + amplitude * (2.0 * rng.random::<f64>() - 1.0);
            e.awt = (e.awt * factor).max(0.0);
        }
        out.index();
        out
    }

    /// Random simple path from source to destination found by a randomized
    /// depth-first search, or `None` if the destination is unreachable.
    pub fn random_path<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<usize>> {
        let n = self.node_count();
        let mut visited = vec![false; n];
        let mut path = vec![self.source];
        visited[self.source] = true;
        let mut stack: Vec<Vec<usize>> = vec![self.shuffled_successors(self.source, rng)];
        while let Some(frontier) = stack.last_mut() {
            match frontier.pop() {
                None => {
                    stack.pop();
                    path.pop();
                }
                Some(v) if visited[v] => {}
                Some(v) => {
                    path.push(v);
                    if v == self.destination {
                        return Some(path);
                    }
                    visited[v] = true;
                    let next = self.shuffled_successors(v, rng);
                    stack.push(next);
                }
            }
        }
        None
    }

    fn shuffled_successors<R: Rng + ?Sized>(&self, u: usize, rng: &mut R) -> Vec<usize> {
        let mut s = self.out[u].clone();
        s.shuffle(rng);
        s
    }

    /// Cost used to rank candidate strings that may not be valid paths:
    /// true cost for valid paths, otherwise a large penalty per missing link.
    fn ranking_cost(&self, path: &[usize]) -> f64 {
        let mut broken = 0usize;
        if path.first() != Some(&self.source) {
            broken += 2;
        }
        if path.last() != Some(&self.destination) {
            broken += 2;
        }
        let mut total = 0.0;
        let mut res = vec![0.0; self.caps.len()];
        for w in path.windows(2) {
            match self.edge(w[0], w[1]) {
                Some(e) => {
                    total += self.edge_cost(e);
                    for (r, x) in res.iter_mut().zip(&e.resources) {
                        *r += x;
                    }
                }
                None => broken += 1,
            }
        }
        let over = res.iter().zip(&self.caps).filter(|(r, c)| r > c).count();
        total + BROKEN_LINK * (broken + over) as f64
    }
}

/// Travel and waiting time of a path.
///
/// A path that exceeds a resource cap gets an infinite `f`; `f1` and `f2`
/// still report the traversed totals.
pub fn road_fitness(net: &RoadNetwork, path: &EventSequence) -> Result<RoadCost, ProblemError> {
    let p = path.as_slice();
    if p.first() != Some(&net.source) || p.last() != Some(&net.destination) {
        return Err(ProblemError::WrongEndpoints {
            origin: net.source,
            destination: net.destination,
        });
    }
    let mut f1 = 0.0;
    let mut f2 = 0.0;
    let mut res = vec![0.0; net.caps.len()];
    for w in p.windows(2) {
        let e = net
            .edge(w[0], w[1])
            .ok_or(ProblemError::DisconnectedPath { from: w[0], to: w[1] })?;
        f1 += e.distance / net.velocity;
        f2 += e.awt;
        for (r, x) in res.iter_mut().zip(&e.resources) {
            *r += x;
        }
    }
    let feasible = res.iter().zip(&net.caps).all(|(r, c)| r <= c);
    let f = if feasible { f1 + f2 } else { f64::INFINITY };
    Ok(RoadCost { f1, f2, f })
}

impl DiscreteProblem for RoadNetwork {
    fn kind(&self) -> SequenceKind {
        SequenceKind::Path
    }

    fn universe(&self) -> usize {
        self.node_count()
    }

    fn random_sequence<R: Rng + ?Sized>(&self, rng: &mut R) -> EventSequence {
        EventSequence::new(
            self.random_path(rng)
                .unwrap_or_else(|| vec![self.source, self.destination]),
        )
    }

    fn evaluate(&self, seq: &EventSequence, _threshold: usize) -> Result<f64, ProblemError> {
        Ok(road_fitness(self, seq).map(|c| c.f).unwrap_or(f64::INFINITY))
    }

    fn move_cost(
        &self,
        seq: &EventSequence,
        _threshold: usize,
        bait: usize,
        position: usize,
        case: crate::operators::BaitCase,
    ) -> f64 {
        crate::operators::baiting(seq, SequenceKind::Path, self.node_count(), bait, position, case)
            .map(|s| self.ranking_cost(s.as_slice()))
            .unwrap_or(f64::INFINITY)
    }

    fn rotation_scope(&self) -> RotationScope {
        RotationScope::Disabled
    }

    fn linked(&self, a: usize, b: usize) -> bool {
        self.edge(a, b).is_some()
    }

    fn secondary_applicable(&self) -> bool {
        true
    }

    fn component_names(&self) -> &'static [&'static str] {
        &["travel", "waiting"]
    }

    fn components(&self, seq: &EventSequence, _threshold: usize) -> Vec<f64> {
        match road_fitness(self, seq) {
            Ok(c) => vec![c.f1, c.f2],
            Err(_) => vec![f64::INFINITY, f64::INFINITY],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(from: usize, to: usize, distance: f64, awt: f64) -> RoadEdge {
        RoadEdge {
            from,
            to,
            distance,
            awt,
            resources: Vec::new(),
        }
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("N{i}")).collect()
    }

    #[test]
    fn single_edge_substitution() {
        let net = RoadNetwork::new("e", labels(2), vec![edge(0, 1, 10.0, 3.0)], 10.0, 0, 1, vec![]).unwrap();
        let c = road_fitness(&net, &EventSequence::new(vec![0, 1])).unwrap();
        assert_eq!((c.f1, c.f2, c.f), (1.0, 3.0, 4.0));
    }

    #[test]
    fn path_errors() {
        let net = RoadNetwork::new(
            "e",
            labels(3),
            vec![edge(0, 1, 1.0, 0.0), edge(1, 2, 1.0, 0.0)],
            1.0,
            0,
            2,
            vec![],
        )
        .unwrap();
        assert_eq!(
            road_fitness(&net, &EventSequence::new(vec![0, 2])),
            Err(ProblemError::DisconnectedPath { from: 0, to: 2 })
        );
        assert_eq!(
            road_fitness(&net, &EventSequence::new(vec![1, 2])),
            Err(ProblemError::WrongEndpoints {
                origin: 0,
                destination: 2
            })
        );
        assert_eq!(net.evaluate(&EventSequence::new(vec![0, 2]), 0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn parallel_edges_use_cheapest() {
        let net = RoadNetwork::new(
            "p",
            labels(2),
            vec![edge(0, 1, 10.0, 5.0), edge(0, 1, 30.0, 0.5), edge(0, 1, 20.0, 4.0)],
            10.0,
            0,
            1,
            vec![],
        )
        .unwrap();
        let c = road_fitness(&net, &EventSequence::new(vec![0, 1])).unwrap();
        assert_eq!(c.f, 3.5);
    }

    #[test]
    fn resource_caps_make_path_infeasible() {
        let mut e1 = edge(0, 1, 1.0, 0.0);
        e1.resources = vec![3.0];
        let mut e2 = edge(1, 2, 1.0, 0.0);
        e2.resources = vec![3.0];
        let tight = RoadNetwork::new("r", labels(3), vec![e1.clone(), e2.clone()], 1.0, 0, 2, vec![5.0]).unwrap();
        let c = road_fitness(&tight, &EventSequence::new(vec![0, 1, 2])).unwrap();
        assert_eq!((c.f1, c.f), (2.0, f64::INFINITY));
        let loose = RoadNetwork::new("r", labels(3), vec![e1, e2], 1.0, 0, 2, vec![6.0]).unwrap();
        assert_eq!(road_fitness(&loose, &EventSequence::new(vec![0, 1, 2])).unwrap().f, 2.0);
    }

    #[test]
    fn random_paths_are_valid_and_simple() {
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in 0..6 {
                if u != v && (u + v) % 3 != 0 {
                    edges.push(edge(u, v, 1.0 + u as f64, 0.5));
                }
            }
        }
        let net = RoadNetwork::new("g", labels(6), edges, 2.0, 0, 5, vec![]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = net.random_path(&mut rng).unwrap();
            let mut sorted = p.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), p.len());
            assert!(road_fitness(&net, &EventSequence::new(p)).is_ok());
        }
    }

    #[test]
    fn unreachable_destination() {
        let net = RoadNetwork::new("u", labels(3), vec![edge(0, 1, 1.0, 1.0)], 1.0, 0, 2, vec![]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(net.random_path(&mut rng).is_none());
    }

    #[test]
    fn invalid_networks_rejected() {
        assert!(RoadNetwork::new("x", labels(2), vec![], 0.0, 0, 1, vec![]).is_err());
        assert!(RoadNetwork::new("x", labels(2), vec![], 1.0, 1, 1, vec![]).is_err());
        assert!(RoadNetwork::new("x", labels(2), vec![edge(0, 3, 1.0, 1.0)], 1.0, 0, 1, vec![]).is_err());
        assert!(RoadNetwork::new("x", labels(2), vec![edge(0, 1, -1.0, 1.0)], 1.0, 0, 1, vec![]).is_err());
    }

    #[test]
    fn noise_is_seeded_and_non_negative() {
        let net = RoadNetwork::new("n", labels(2), vec![edge(0, 1, 1.0, 2.0)], 1.0, 0, 1, vec![]).unwrap();
        let a = net.with_awt_noise(0.5, 3);
        let b = net.with_awt_noise(0.5, 3);
        assert_eq!(a, b);
        assert!((1.0..=3.0).contains(&a.edges[0].awt));
    }
}
