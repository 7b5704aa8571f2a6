//! Seeded instances shared by the benchmarks.

use ghosa_core::{KnapsackInstance, Metric, QapInstance, TspInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tsp(n: usize, seed: u64) -> TspInstance {
    let mut r = rng(seed);
    let coords = (0..n)
        .map(|_| [r.random_range(0.0..1000.0), r.random_range(0.0..1000.0)])
        .collect();
    TspInstance::from_coords("bench", coords, Metric::Euc2d).expect("valid coordinates")
}

pub fn qap(n: usize, seed: u64) -> QapInstance {
    let mut r = rng(seed);
    let flow = (0..n * n).map(|_| r.random_range(0..20)).collect();
    let dist = (0..n * n).map(|_| r.random_range(0..20)).collect();
    QapInstance::new("bench", n, flow, dist).expect("square matrices")
}

pub fn knapsack(m: usize, n: usize, seed: u64) -> KnapsackInstance {
    let mut r = rng(seed);
    let profit = (0..n).map(|_| r.random_range(1.0..100.0)).collect();
    let weight: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| r.random_range(1.0..50.0)).collect())
        .collect();
    let capacity = weight.iter().map(|row| row.iter().sum::<f64>() / 2.0).collect();
    KnapsackInstance::new("bench", profit, weight, capacity).expect("consistent sizes")
}
