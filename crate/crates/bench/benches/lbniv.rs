use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ghosa_core::lbniv::{adapt_and_clamp, lbniv_update, update_contributors};
use ghosa_core::{optimize_continuous, Benchmark, BenchmarkId, ContinuousAgent, ContinuousConfig, LbnivParams};

fn step(c: &mut Criterion) {
    let dim = 30;
    let params = LbnivParams::new(vec![(-20.0, 20.0); dim]);
    let mut agent = ContinuousAgent::new(vec![1.0; dim], 5.0, 0.2);
    agent.d_rear = vec![0.3; dim];
    agent.d_front = vec![-0.2; dim];
    let best = vec![0.0; dim];
    let front = vec![2.0; dim];
    let rear = vec![-1.0; dim];
    c.bench_function("lbniv step d=30", |b| {
        b.iter(|| {
            let mut a = agent.clone();
            let x = lbniv_update(&a, black_box(&best), &front, &rear, &params).expect("dimensions agree");
            let x = adapt_and_clamp(&mut a, &x, &params);
            update_contributors(&mut a, &x, 4.0, &front, &rear)
        })
    });
}

fn short_run(c: &mut Criterion) {
    let f6 = Benchmark::new(BenchmarkId::new(6).expect("f6 exists"));
    let cfg = ContinuousConfig {
        iterations: 100,
        ..ContinuousConfig::default()
    };
    c.bench_function("continuous f6, 100 iterations", |b| {
        b.iter(|| optimize_continuous(&f6, black_box(&cfg)))
    });
}

criterion_group!(benches, step, short_run);
criterion_main!(benches);
