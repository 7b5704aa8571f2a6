mod common;

use common::PROPERTY_SUITES;

const CASES: u32 = 10_000;

fn suite(index: usize) {
    let (name, run) = PROPERTY_SUITES[index];
    if let Err(e) = run(CASES) {
        panic!("{name}: {e}");
    }
}

#[test]
fn permutation_closure() {
    suite(0);
}

#[test]
fn rotation_multiset_and_inverse() {
    suite(1);
}

#[test]
fn knapsack_decode_one_count() {
    suite(2);
}

#[test]
fn feasibility_of_nonzero_profit() {
    suite(3);
}

#[test]
fn branch_arithmetic() {
    suite(4);
}

#[test]
fn epsilon_positivity_and_inverse() {
    suite(5);
}

#[test]
fn monotone_traces() {
    suite(6);
}

#[test]
fn harness_replay_determinism() {
    suite(7);
}
