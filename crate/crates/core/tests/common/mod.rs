//! Shared generators and property checks for the integration targets.
#![allow(dead_code)]

use std::path::PathBuf;

use ghosa_core::engine::{propose, random_agent};
use ghosa_core::harness::{run_experiment, Algorithm, ExperimentConfig, ProblemSpec};
use ghosa_core::lbniv::{update_d, update_epsilon};
use ghosa_core::operators::{attracting_prey_swarms, baiting, BaitSelector};
use ghosa_core::problems::{knapsack_decode, knapsack_profit, RoadEdge};
use ghosa_core::{
    optimize, optimize_continuous, BaitCase, Benchmark, BenchmarkId, ContinuousConfig, EngineConfig, EventSequence,
    KnapsackInstance, Metric, OperatorConfig, QapInstance, RoadNetwork, SequenceKind, TspInstance,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn random_tsp(n: usize, rng: &mut impl Rng) -> TspInstance {
    let coords = (0..n)
        .map(|_| {
            [
                rng.random_range(0.0..100.0_f64).round(),
                rng.random_range(0.0..100.0_f64).round(),
            ]
        })
        .collect();
    TspInstance::from_coords("rand-tsp", coords, Metric::Euc2d).unwrap()
}

pub fn random_qap(n: usize, rng: &mut impl Rng) -> QapInstance {
    let mut flow = vec![0; n * n];
    let mut dist = vec![0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let f = rng.random_range(0..10);
            let d = rng.random_range(1..10);
            flow[i * n + j] = f;
            flow[j * n + i] = f;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    QapInstance::new("rand-qap", n, flow, dist).unwrap()
}

pub fn random_knapsack(m: usize, n: usize, rng: &mut impl Rng) -> KnapsackInstance {
    let profit = (0..n).map(|_| rng.random_range(1..100) as f64).collect();
    let weight: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(1..50) as f64).collect())
        .collect();
    let capacity = weight.iter().map(|r| (r.iter().sum::<f64>() * 0.5).floor()).collect();
    KnapsackInstance::new("rand-mknap", profit, weight, capacity).unwrap()
}

/// Random DAG on `n` nodes from node 0 to node `n - 1`, with a guaranteed
/// chain so the destination is reachable.
pub fn random_road(n: usize, rng: &mut impl Rng) -> RoadNetwork {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if j == i + 1 || rng.random_bool(0.35) {
                edges.push(RoadEdge {
                    from: i,
                    to: j,
                    distance: rng.random_range(1..20) as f64,
                    awt: rng.random_range(0..6) as f64,
                    resources: Vec::new(),
                });
            }
        }
    }
    let labels = (0..n).map(|i| format!("n{i}")).collect();
    RoadNetwork::new("rand-road", labels, edges, 1.0, 0, n - 1, Vec::new()).unwrap()
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn permutation(max: usize) -> impl Strategy<Value = Vec<usize>> {
    (2..=max).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
}

fn case() -> impl Strategy<Value = BaitCase> {
    prop_oneof![
        Just(BaitCase::MissCatch),
        Just(BaitCase::Catch),
        Just(BaitCase::FalseCatch)
    ]
}

fn check(cases: u32, test: impl Fn(&mut TestRunner) -> Result<(), String>) -> Result<(), String> {
    test(&mut runner(cases))
}

/// Baiting, rotation and the full proposal pipeline keep permutations closed.
pub fn permutation_closure(cases: u32) -> Result<(), String> {
    check(cases, |r| {
        let strat = (permutation(40), any::<u64>(), any::<u64>(), case());
        r.run(&strat, |(perm, a, b, c)| {
            let n = perm.len();
            let seq = EventSequence::new(perm);
            let bait = (a % n as u64) as usize;
            let pos = (b % n as u64) as usize;
            let out = baiting(&seq, SequenceKind::Permutation, n, bait, pos, c).unwrap();
            prop_assert!(out.is_permutation_of(n));

            let start = (a % (n as u64 - 1)) as usize;
            let end = start + 2 + (b % (n - start - 1) as u64) as usize;
            let shift = 1 + (a % (end - start - 1) as u64) as usize;
            let rotated = attracting_prey_swarms(&seq, pos, shift, start..end).unwrap();
            prop_assert!(rotated.is_permutation_of(n));
            Ok(())
        })
        .map_err(|e| e.to_string())?;

        let strat = (4usize..20, any::<u64>());
        r.run(&strat, |(n, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tsp = random_tsp(n, &mut rng);
            let qap = random_qap(n.min(9), &mut rng);
            let ops = OperatorConfig::default();
            let agent = random_agent(&tsp, ops.secondary_method, &mut rng).unwrap();
            let mut baits = BaitSelector::new(n);
            let (cand, _) = propose(&tsp, &agent, &ops, &mut baits, &mut rng).unwrap();
            prop_assert!(cand.is_permutation_of(n));
            let agent = random_agent(&qap, ops.secondary_method, &mut rng).unwrap();
            let mut baits = BaitSelector::new(qap.n);
            let (cand, _) = propose(&qap, &agent, &ops, &mut baits, &mut rng).unwrap();
            prop_assert!(cand.is_permutation_of(qap.n));
            Ok(())
        })
        .map_err(|e| e.to_string())
    })
}

/// Rotation keeps the multiset of events and is undone by the complementary
/// shift, including on strings with repeated events.
pub fn rotation_multiset_and_inverse(cases: u32) -> Result<(), String> {
    check(cases, |r| {
        let strat = (prop::collection::vec(0usize..6, 2..40), any::<u64>(), any::<u64>());
        r.run(&strat, |(events, a, b)| {
            let n = events.len();
            let seq = EventSequence::new(events);
            let start = (a % (n as u64 - 1)) as usize;
            let end = start + 2 + (b % (n - start - 1) as u64) as usize;
            let seg_len = end - start;
            let shift = 1 + (b % (seg_len as u64 - 1)) as usize;
            let out = attracting_prey_swarms(&seq, start, shift, start..end).unwrap();
            let mut x = out.as_slice().to_vec();
            let mut y = seq.as_slice().to_vec();
            x.sort_unstable();
            y.sort_unstable();
            prop_assert_eq!(x, y);
            prop_assert_eq!(&out.as_slice()[..start], &seq.as_slice()[..start]);
            prop_assert_eq!(&out.as_slice()[end..], &seq.as_slice()[end..]);
            let back = attracting_prey_swarms(&out, start, seg_len - shift, start..end).unwrap();
            prop_assert_eq!(back, seq);
            Ok(())
        })
        .map_err(|e| e.to_string())
    })
}

/// The decoded selection has exactly `n - threshold` ones.
pub fn knapsack_decode_one_count(cases: u32) -> Result<(), String> {
    check(cases, |r| {
        let strat = permutation(60).prop_flat_map(|p| {
            let n = p.len();
            (Just(p), 1..=n)
        });
        r.run(&strat, |(perm, t)| {
            let n = perm.len();
            let bits = knapsack_decode(&EventSequence::new(perm), t).unwrap();
            prop_assert_eq!(bits.iter().filter(|b| **b).count(), n - t);
            Ok(())
        })
        .map_err(|e| e.to_string())
    })
}

/// Nonzero profit implies every constraint row holds.
pub fn feasibility_of_nonzero_profit(cases: u32) -> Result<(), String> {
    check(cases, |r| {
        let strat = (1usize..5, 1usize..16, any::<u64>(), any::<u64>());
        r.run(&strat, |(m, n, seed, mask)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut inst = random_knapsack(m, n, &mut rng);
            for c in inst.capacity.iter_mut() {
                *c = (*c * rng.random_range(0.0..2.0)).floor();
            }
            let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let p = knapsack_profit(&inst, &bits);
            if p > 0.0 {
                for row in 0..m {
                    let used: f64 = (0..n).filter(|&i| bits[i]).map(|i| inst.weight[row][i]).sum();
                    prop_assert!(used <= inst.capacity[row]);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })
}

/// Contributor update: relative change with the sign set by the branch
/// test, negated when the branch flips. Step-scale update: divide above,
/// multiply below, keep inside.
pub fn lbniv_branch_arithmetic(cases: u32) -> Result<(), String> {
    check(cases, |r| {
        let strat = (
            -1e6f64..1e6,
            prop_oneof![-1e6f64..-1e-6, 1e-6f64..1e6],
            -100f64..100.0,
            -100f64..100.0,
            1e-6f64..10.0,
            1.0001f64..10.0,
        );
        r.run(&strat, |(jt, jp, x, xp, eps, k)| {
            let rel = (jp - jt) / jp.abs();
            let d = update_d(jt, jp, x, xp);
            prop_assert!(!d.degenerate);
            prop_assert_eq!(d.value, if x >= xp { rel } else { -rel });
            if x != xp {
                let flipped = update_d(jt, jp, xp, x);
                prop_assert_eq!(flipped.value, -d.value);
            }
            prop_assert!(update_d(jt, 0.0, x, xp).degenerate);
            prop_assert_eq!(update_epsilon(eps, 11.0, (-10.0, 10.0), k), eps / k);
            prop_assert_eq!(update_epsilon(eps, -11.0, (-10.0, 10.0), k), eps * k);
            prop_assert_eq!(update_epsilon(eps, x.clamp(-10.0, 10.0), (-10.0, 10.0), k), eps);
            Ok(())
        })
        .map_err(|e| e.to_string())
    })
}

/// Step scales stay positive under any sequence of bound violations, and an
/// above/below pair restores the value (exactly for power-of-two `k`).
pub fn epsilon_positivity_and_inverse(cases: u32) -> Result<(), String> {
    check(cases, |r| {
        let strat = (
            1e-3f64..10.0,
            prop_oneof![Just(2.0f64), Just(4.0), 1.0001f64..8.0],
            prop::collection::vec(-30f64..30.0, 0..200),
        );
        r.run(&strat, |(eps0, k, xs)| {
            let bounds = (-10.0, 10.0);
            let mut eps = eps0;
            for x in xs {
                eps = update_epsilon(eps, x, bounds, k);
                prop_assert!(eps > 0.0);
            }
            let restored = update_epsilon(update_epsilon(eps, 20.0, bounds, k), -20.0, bounds, k);
            if k.log2().fract() == 0.0 {
                prop_assert_eq!(restored, eps);
            } else {
                prop_assert!((restored - eps).abs() <= 4.0 * f64::EPSILON * eps);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })
}

/// Global-best traces never increase, for the discrete and the continuous
/// engine alike.
pub fn monotone_traces(cases: u32) -> Result<(), String> {
    check(cases, |r| {
        let strat = (3usize..9, 1usize..8, 1usize..12, any::<u64>(), 1u8..=25);
        r.run(&strat, |(n, pop, iters, seed, f)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cfg = EngineConfig {
                population: pop,
                iterations: iters,
                seed,
                ..EngineConfig::default()
            };
            let tsp = random_tsp(n, &mut rng);
            let out = optimize(&tsp, &cfg).unwrap();
            prop_assert!(out.trace.is_monotone_non_increasing());
            prop_assert_eq!(out.trace.last(), Some(out.best.fitness));
            let road = random_road(n, &mut rng);
            prop_assert!(optimize(&road, &cfg).unwrap().trace.is_monotone_non_increasing());

            let bench = Benchmark::new(BenchmarkId::new(f).unwrap());
            let ccfg = ContinuousConfig {
                population: pop,
                iterations: iters,
                seed,
                ..ContinuousConfig::default()
            };
            let out = optimize_continuous(&bench, &ccfg).unwrap();
            prop_assert!(out.trace.is_monotone_non_increasing());
            Ok(())
        })
        .map_err(|e| e.to_string())
    })
}

/// Two harness runs from the same configuration give bitwise-identical
/// per-run results and traces.
pub fn harness_replay_determinism(cases: u32) -> Result<(), String> {
    check(cases, |r| {
        let strat = (any::<u64>(), 0usize..3, 1u8..=25, 0usize..3, 1usize..4);
        r.run(&strat, |(seed, algo, f, problem, runs)| {
            let spec = match problem {
                0 => ProblemSpec::Benchmark {
                    id: BenchmarkId::new(f).unwrap(),
                    dim: None,
                },
                1 => ProblemSpec::Qap {
                    path: fixture("toy6.dat"),
                },
                _ => ProblemSpec::Road {
                    path: fixture("toy.roadnet"),
                    awt_noise: Some((0.5, seed)),
                },
            };
            let algorithm = match (problem, algo) {
                (0, 1) => Algorithm::Ga,
                (0, 2) => Algorithm::Pso,
                _ => Algorithm::Ghosa,
            };
            let cfg = ExperimentConfig {
                runs,
                iterations: 4,
                population: 4,
                seed_base: seed >> 1,
                workers: 2,
                ..ExperimentConfig::new(spec, algorithm)
            };
            let a = run_experiment(&cfg, None).unwrap();
            let b = run_experiment(&cfg, None).unwrap();
            for (x, y) in a.runs.iter().zip(&b.runs) {
                prop_assert_eq!(x.best.to_bits(), y.best.to_bits());
                prop_assert_eq!(&x.solution, &y.solution);
                prop_assert_eq!(&x.trace, &y.trace);
            }
            prop_assert_eq!(a.stats, b.stats);
            Ok(())
        })
        .map_err(|e| e.to_string())
    })
}

/// Every property suite with its name.
pub type Suite = fn(u32) -> Result<(), String>;

pub const PROPERTY_SUITES: [(&str, Suite); 8] = [
    ("permutation closure after every operator", permutation_closure),
    (
        "rotation multiset preservation and inversion",
        rotation_multiset_and_inverse,
    ),
    ("knapsack decode one-count", knapsack_decode_one_count),
    (
        "feasibility implication of nonzero profit",
        feasibility_of_nonzero_profit,
    ),
    ("contributor and step-scale branch arithmetic", lbniv_branch_arithmetic),
    (
        "step-scale positivity and inverse-pair restoration",
        epsilon_positivity_and_inverse,
    ),
    ("global-best monotone traces", monotone_traces),
    (
        "seeded replay determinism of the full harness",
        harness_replay_determinism,
    ),
];

/// Shuffled copy of `0..n`, for tests that need a random permutation.
pub fn shuffled(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Every fixture round-trips through its writer, and each format rejects a
/// file whose contents disagree with its declared dimensions.
pub fn parser_golden() -> Result<(), String> {
    use ghosa_core::ingest::*;

    let read = |f: &str| std::fs::read_to_string(fixture(f)).map_err(|e| format!("{f}: {e}"));
    let tsp = parse_tsplib(&read("ulysses16.tsp")?).map_err(|e| e.to_string())?;
    let text = write_tsplib(&tsp).map_err(|e| e.to_string())?;
    if parse_tsplib(&text).map_err(|e| e.to_string())? != tsp
        || write_tsplib(&parse_tsplib(&text).unwrap()).unwrap() != text
    {
        return Err("TSPLIB round trip".into());
    }
    let qap = parse_qaplib(&read("toy6.dat")?, "toy6").map_err(|e| e.to_string())?;
    if parse_qaplib(&write_qaplib(&qap), "toy6").map_err(|e| e.to_string())? != qap {
        return Err("QAPLIB round trip".into());
    }
    let mk = parse_orlib_mknap(&read("toy.mknap")?, "toy").map_err(|e| e.to_string())?;
    if parse_orlib_mknap(&write_orlib_mknap(&mk), "toy").map_err(|e| e.to_string())? != mk {
        return Err("OR-Library round trip".into());
    }
    let road = parse_roadnet(&read("toy.roadnet")?, "toy").map_err(|e| e.to_string())?;
    if parse_roadnet(&write_roadnet(&road), "toy").map_err(|e| e.to_string())? != road {
        return Err("road network round trip".into());
    }

    let bad_tsp = read("ulysses16.tsp")?.replace("DIMENSION: 16", "DIMENSION: 17");
    if !matches!(parse_tsplib(&bad_tsp), Err(IngestError::DimensionMismatch { .. })) {
        return Err("TSPLIB dimension mismatch accepted".into());
    }
    let bad_qap = read("toy6.dat")?.replacen('6', "7", 1);
    if !matches!(parse_qaplib(&bad_qap, "q"), Err(IngestError::TruncatedMatrix { .. })) {
        return Err("QAPLIB dimension mismatch accepted".into());
    }
    let bad_mk = read("toy.mknap")?.replacen("6 2 0", "7 2 0", 1);
    if parse_orlib_mknap(&bad_mk, "m").is_ok() {
        return Err("OR-Library dimension mismatch accepted".into());
    }
    let bad_road = read("toy.roadnet")?.replace("S A 4 1", "S A 4");
    if parse_roadnet(&bad_road, "r").is_ok() {
        return Err("short road edge accepted".into());
    }
    Ok(())
}
