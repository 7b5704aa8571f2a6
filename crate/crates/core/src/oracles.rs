//! Exact solvers for small instances, used to check optimizer output.

use std::collections::{BTreeMap, VecDeque};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::ingest::checksum;
use crate::problems::{KnapsackInstance, QapInstance, RoadNetwork, TspInstance};
use crate::sequence::EventSequence;

pub const TSP_LIMIT: usize = 10;
pub const QAP_LIMIT: usize = 9;
pub const KNAPSACK_EXHAUSTIVE_LIMIT: usize = 22;
pub const ROAD_EXHAUSTIVE_LIMIT: usize = 15;
/// Largest capacity the single-constraint dynamic program will tabulate.
pub const KNAPSACK_DP_CAPACITY_LIMIT: f64 = 1e7;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("instance of size {size} exceeds the exact-solver limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("destination is unreachable from the source")]
    Disconnected,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Optimizer {
    Tour(EventSequence),
    Permutation(EventSequence),
    Selection(Vec<bool>),
    Path(EventSequence),
}

/// Exact optimum in the problem's natural sense: length or cost for TSP,
/// QAP and roads, profit for knapsack.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub optimum: f64,
    pub optimizer: Optimizer,
    pub nodes_explored: u64,
}

/// Visits every permutation of `items[k..]` in place.
fn permute<F: FnMut(&[usize])>(items: &mut [usize], k: usize, visit: &mut F) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Scans all `(n-1)!/2` distinct tours, fixing city 0 first and keeping one
/// direction of each.
pub fn brute_force_tsp(inst: &TspInstance) -> Result<OracleResult, OracleError> {
    let n = inst.n;
    if n > TSP_LIMIT {
        return Err(OracleError::TooLarge {
            size: n,
            limit: TSP_LIMIT,
        });
    }
    if n <= 3 {
        let tour: Vec<usize> = (0..n).collect();
        let len = (0..n).map(|k| inst.distance(tour[k], tour[(k + 1) % n])).sum();
        return Ok(OracleResult {
            optimum: len,
            optimizer: Optimizer::Tour(EventSequence::new(tour)),
            nodes_explored: 1,
        });
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    let mut best_tour = Vec::new();
    let mut explored = 0u64;
    permute(&mut rest, 0, &mut |p: &[usize]| {
        if p[0] > p[p.len() - 1] {
            return;
        }
        explored += 1;
        let mut len = inst.distance(0, p[0]) + inst.distance(p[p.len() - 1], 0);
        for w in p.windows(2) {
            len += inst.distance(w[0], w[1]);
        }
        if len < best {
            best = len;
            best_tour = std::iter::once(0).chain(p.iter().copied()).collect();
        }
    });
    Ok(OracleResult {
        optimum: best,
        optimizer: Optimizer::Tour(EventSequence::new(best_tour)),
        nodes_explored: explored,
    })
}

pub fn brute_force_qap(inst: &QapInstance) -> Result<OracleResult, OracleError> {
    let n = inst.n;
    if n > QAP_LIMIT {
        return Err(OracleError::TooLarge {
            size: n,
            limit: QAP_LIMIT,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = i64::MAX;
    let mut best_perm = perm.clone();
    let mut explored = 0u64;
    permute(&mut perm, 0, &mut |p: &[usize]| {
        explored += 1;
        let mut cost = 0i64;
        for i in 0..n {
            for j in 0..n {
                cost += inst.f(i, j) * inst.d(p[i], p[j]);
            }
        }
        if cost < best {
            best = cost;
            best_perm = p.to_vec();
        }
    });
    Ok(OracleResult {
        optimum: best as f64,
        optimizer: Optimizer::Permutation(EventSequence::new(best_perm)),
        nodes_explored: explored,
    })
}

/// Exhaustive subset scan for `n <= 22`, otherwise a dynamic program when
/// there is one constraint with integral weights.
pub fn exact_knapsack(inst: &KnapsackInstance) -> Result<OracleResult, OracleError> {
    if inst.n <= KNAPSACK_EXHAUSTIVE_LIMIT {
        return Ok(knapsack_exhaustive(inst));
    }
    if inst.m == 1 {
        if let Some(r) = knapsack_dp(inst) {
            return Ok(r);
        }
    }
    Err(OracleError::TooLarge {
        size: inst.n,
        limit: KNAPSACK_EXHAUSTIVE_LIMIT,
    })
}

fn knapsack_exhaustive(inst: &KnapsackInstance) -> OracleResult {
    let (n, m) = (inst.n, inst.m);
    // Gray-code walk: one item flips per step.
    let mut bits = vec![false; n];
    let mut load = vec![0.0; m];
    let mut profit = 0.0;
    let mut best = 0.0;
    let mut best_bits = bits.clone();
    let total = 1u64 << n;
    for step in 1..total {
        let i = step.trailing_zeros() as usize;
        let sign = if bits[i] { -1.0 } else { 1.0 };
        bits[i] = !bits[i];
        profit += sign * inst.profit[i];
        for (r, l) in load.iter_mut().enumerate() {
            *l += sign * inst.weight[r][i];
        }
        if profit > best && load.iter().zip(&inst.capacity).all(|(l, c)| *l <= *c + 1e-9) {
            // Recompute exactly to avoid drift from the running sums.
            let exact = crate::problems::knapsack_profit(inst, &bits);
            if exact > best {
                best = exact;
                best_bits = bits.clone();
            }
        }
    }
    OracleResult {
        optimum: best,
        optimizer: Optimizer::Selection(best_bits),
        nodes_explored: total,
    }
}

fn knapsack_dp(inst: &KnapsackInstance) -> Option<OracleResult> {
    let cap = inst.capacity[0];
    let w = &inst.weight[0];
    if cap > KNAPSACK_DP_CAPACITY_LIMIT || cap.fract() != 0.0 || w.iter().any(|x| x.fract() != 0.0) {
        return None;
    }
    let cap = cap as usize;
    let n = inst.n;
    let mut table = vec![vec![0.0f64; cap + 1]; n + 1];
    for i in 1..=n {
        let wi = w[i - 1] as usize;
        for c in 0..=cap {
            let skip = table[i - 1][c];
            table[i][c] = if wi <= c {
                skip.max(table[i - 1][c - wi] + inst.profit[i - 1])
            } else {
                skip
            };
        }
    }
    let mut bits = vec![false; n];
    let mut c = cap;
    for i in (1..=n).rev() {
        if table[i][c] != table[i - 1][c] {
            bits[i - 1] = true;
            c -= w[i - 1] as usize;
        }
    }
    Some(OracleResult {
        optimum: table[n][cap],
        optimizer: Optimizer::Selection(bits),
        nodes_explored: ((n + 1) * (cap + 1)) as u64,
    })
}

/// Minimum `f` over source-destination paths. Small networks (and any with
/// resource caps) are solved by enumerating simple paths; larger ones by
/// label correcting on the scalarized edge cost.
pub fn exact_shortest_paths(net: &RoadNetwork) -> Result<OracleResult, OracleError> {
    let n = net.node_count();
    if n <= ROAD_EXHAUSTIVE_LIMIT {
        return road_exhaustive(net);
    }
    if !net.caps.is_empty() {
        return Err(OracleError::TooLarge {
            size: n,
            limit: ROAD_EXHAUSTIVE_LIMIT,
        });
    }
    road_label_correcting(net)
}

fn road_exhaustive(net: &RoadNetwork) -> Result<OracleResult, OracleError> {
    struct Search<'a> {
        net: &'a RoadNetwork,
        visited: Vec<bool>,
        path: Vec<usize>,
        res: Vec<f64>,
        best: f64,
        best_path: Vec<usize>,
        explored: u64,
    }
    impl Search<'_> {
        fn go(&mut self, u: usize, cost: f64) {
            self.explored += 1;
            if u == self.net.destination {
                if cost < self.best && self.res.iter().zip(&self.net.caps).all(|(r, c)| r <= c) {
                    self.best = cost;
                    self.best_path = self.path.clone();
                }
                return;
            }
            for &v in self.net.successors(u) {
                if self.visited[v] {
                    continue;
                }
                let e = self.net.edge(u, v).expect("successor has an edge");
                self.visited[v] = true;
                self.path.push(v);
                for (r, x) in self.res.iter_mut().zip(&e.resources) {
                    *r += x;
                }
                let c = cost + self.net.edge_cost(e);
                self.go(v, c);
                for (r, x) in self.res.iter_mut().zip(&e.resources) {
                    *r -= x;
                }
                self.path.pop();
                self.visited[v] = false;
            }
        }
    }
    let mut s = Search {
        net,
        visited: vec![false; net.node_count()],
        path: vec![net.source],
        res: vec![0.0; net.caps.len()],
        best: f64::INFINITY,
        best_path: Vec::new(),
        explored: 0,
    };
    s.visited[net.source] = true;
    s.go(net.source, 0.0);
    if s.best_path.is_empty() {
        return Err(OracleError::Disconnected);
    }
    Ok(OracleResult {
        optimum: s.best,
        optimizer: Optimizer::Path(EventSequence::new(s.best_path)),
        nodes_explored: s.explored,
    })
}

fn road_label_correcting(net: &RoadNetwork) -> Result<OracleResult, OracleError> {
    let n = net.node_count();
    let mut label = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut queued = vec![false; n];
    let mut queue = VecDeque::from([net.source]);
    label[net.source] = 0.0;
    queued[net.source] = true;
    let mut explored = 0u64;
    while let Some(u) = queue.pop_front() {
        queued[u] = false;
        explored += 1;
        for &v in net.successors(u) {
            let e = net.edge(u, v).expect("successor has an edge");
            let c = label[u] + net.edge_cost(e);
            if c < label[v] {
                label[v] = c;
                pred[v] = u;
                if !queued[v] {
                    queued[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    if !label[net.destination].is_finite() {
        return Err(OracleError::Disconnected);
    }
    let mut path = vec![net.destination];
    while *path.last().unwrap() != net.source {
        path.push(pred[*path.last().unwrap()]);
    }
    path.reverse();
    Ok(OracleResult {
        optimum: label[net.destination],
        optimizer: Optimizer::Path(EventSequence::new(path)),
        nodes_explored: explored,
    })
}

/// Checksum of an instance's canonical JSON form, used as a cache key.
pub fn instance_key<T: Serialize>(instance: &T) -> String {
    checksum(&serde_json::to_vec(instance).expect("instances serialize"))
}

/// Line-oriented `checksum optimum` store of oracle results.
#[derive(Debug)]
pub struct OracleCache {
    path: PathBuf,
    entries: BTreeMap<String, f64>,
}

impl OracleCache {
    /// Opens the cache at `path`; a missing file yields an empty cache.
    /// Malformed lines are skipped.
    pub fn open(path: impl Into<PathBuf>) -> std::io::Result<Self> {
        let path = path.into();
        let mut entries = BTreeMap::new();
        match std::fs::read_to_string(&path) {
            Ok(text) => {
                for line in text.lines() {
                    let mut parts = line.split_whitespace();
                    if let (Some(k), Some(v), None) = (parts.next(), parts.next(), parts.next()) {
                        if let Ok(v) = v.parse::<f64>() {
                            entries.insert(k.to_string(), v);
                        }
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(Self { path, entries })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.entries.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Records a value and appends it to the file.
    pub fn insert(&mut self, key: &str, optimum: f64) -> std::io::Result<()> {
        self.entries.insert(key.to_string(), optimum);
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{key} {optimum}")
    }

    /// Cached value for `key`, computing and storing it on a miss.
    pub fn get_or_compute<E>(&mut self, key: &str, compute: impl FnOnce() -> Result<f64, E>) -> Result<f64, E>
    where
        E: From<std::io::Error>,
    {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.insert(key, v)?;
        Ok(v)
    }
}
