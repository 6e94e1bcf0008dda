//! Seeded corpus of step functions with dyadic measures and values, so every
//! sum and moment below is exact in f64.

#![allow(dead_code)]

use platecert::rearrange::StepFunction;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_b0b1;
pub const CORPUS_SIZE: usize = 1000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// 1 to 12 cells, measures in multiples of 1/64, values in multiples of 1/8
/// within [-4, 4]. Values repeat often so ties are exercised.
pub fn dyadic_step_function(rng: &mut ChaCha8Rng) -> StepFunction {
    let n = rng.random_range(1..=12);
    let cells = (0..n)
        .map(|_| {
            let m = rng.random_range(1..=64) as f64 / 64.0;
            let v = rng.random_range(-32..=32) as f64 / 8.0;
            (m, v)
        })
        .collect();
    StepFunction::new(cells).unwrap()
}

pub fn corpus(seed: u64) -> Vec<StepFunction> {
    let mut r = rng(seed);
    (0..CORPUS_SIZE).map(|_| dyadic_step_function(&mut r)).collect()
}

pub fn shuffled(f: &StepFunction, rng: &mut ChaCha8Rng) -> StepFunction {
    let mut cells = f.cells().to_vec();
    cells.shuffle(rng);
    StepFunction::new(cells).unwrap()
}

/// Random subset of cell indices, possibly empty.
pub fn random_subset(f: &StepFunction, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..f.cells().len()).filter(|_| rng.random_bool(0.5)).collect()
}

/// Measure of `{f > 0}`.
pub fn positive_measure(f: &StepFunction) -> f64 {
    f.cells().iter().filter(|c| c.1 > 0.0).map(|c| c.0).sum()
}
