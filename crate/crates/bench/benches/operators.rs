use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ghosa_bench::{knapsack, qap, rng, tsp};
use ghosa_core::operators::{attracting_prey_swarms, baiting, change_of_position};
use ghosa_core::problems::{qap_cost, tsp_tour_length};
use ghosa_core::{BaitCase, DiscreteProblem, EventSequence, KnapsackProblem, SequenceKind, ThresholdPolicy};
use rand::seq::SliceRandom;

fn shuffled(n: usize, seed: u64) -> EventSequence {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rng(seed));
    EventSequence::new(v)
}

fn operators(c: &mut Criterion) {
    let seq = shuffled(200, 1);
    c.bench_function("baiting miss catch n=200", |b| {
        b.iter(|| {
            baiting(
                black_box(&seq),
                SequenceKind::Permutation,
                200,
                17,
                150,
                BaitCase::MissCatch,
            )
        })
    });
    c.bench_function("rotation n=200", |b| {
        b.iter(|| attracting_prey_swarms(black_box(&seq), 20, 37, 10..190))
    });
}

fn move_costs(c: &mut Criterion) {
    let inst = tsp(280, 2);
    let tour = shuffled(280, 3);
    c.bench_function("tsp change of position, 70 slots", |b| {
        b.iter(|| {
            change_of_position(100..170, |p| {
                inst.move_cost(black_box(&tour), 0, 5, p, BaitCase::MissCatch)
            })
        })
    });
    c.bench_function("tsp full length n=280", |b| {
        b.iter(|| tsp_tour_length(&inst, black_box(&tour)))
    });

    let q = qap(30, 4);
    let perm = shuffled(30, 5);
    c.bench_function("qap swap delta n=30", |b| {
        b.iter(|| q.swap_delta(black_box(perm.as_slice()), 3, 21))
    });
    c.bench_function("qap full cost n=30", |b| b.iter(|| qap_cost(&q, black_box(&perm))));

    let k = KnapsackProblem::new(knapsack(5, 100, 6), ThresholdPolicy::Walk).expect("valid instance");
    let s = shuffled(100, 7);
    c.bench_function("knapsack evaluate m=5 n=100", |b| {
        b.iter(|| k.evaluate(black_box(&s), 50))
    });
}

criterion_group!(benches, operators, move_costs);
criterion_main!(benches);
