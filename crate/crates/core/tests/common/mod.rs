//! Shared helpers for the integration suites.
#![allow(dead_code)] // each test binary uses a different subset

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use two_cycle_core::equilibria::{CorrelatedDistribution, MixedStrategy};
use two_cycle_core::generators::{gen_instance, InstanceOptions};
use two_cycle_core::oracle::DenseWinLoseGame;
use two_cycle_core::TwoCycleGame;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A seeded promise instance with `n` layers.
pub fn promise_game(n: usize, seed: u64) -> TwoCycleGame {
    let (x, y) = gen_instance(&InstanceOptions::new(n, seed)).unwrap();
    TwoCycleGame::build(x, y, true).unwrap()
}

/// A random win-lose game on `n` actions with Bernoulli(1/2) utilities.
pub fn random_dense_game(n: usize, rng: &mut ChaCha8Rng) -> DenseWinLoseGame {
    let table = |rng: &mut ChaCha8Rng| -> Vec<Vec<u8>> {
        (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..2u8)).collect())
            .collect()
    };
    let ua = table(rng);
    let ub = table(rng);
    DenseWinLoseGame::new(ua, ub)
}

/// A random full-support correlated distribution over `n x n` pairs.
pub fn random_correlated(n: usize, rng: &mut ChaCha8Rng) -> CorrelatedDistribution {
    let mut weights: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    CorrelatedDistribution::from_entries(
        n,
        weights
            .into_iter()
            .enumerate()
            .map(|(i, p)| ((i / n, i % n), p)),
    )
    .unwrap()
}

/// A random full-support mixed strategy over `n` actions.
pub fn random_mixed(n: usize, rng: &mut ChaCha8Rng) -> MixedStrategy {
    let mut weights: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    MixedStrategy::new(weights).unwrap()
}

/// A random correlated distribution supported on `support` cells, which keeps
/// the sparse storage in play when `support <= n*n/4`.
pub fn random_sparse_correlated(
    n: usize,
    support: usize,
    rng: &mut ChaCha8Rng,
) -> CorrelatedDistribution {
    let mut cells = std::collections::BTreeMap::new();
    while cells.len() < support {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        cells
            .entry((u, v))
            .or_insert_with(|| rng.gen::<f64>() + 1e-3);
    }
    let total: f64 = cells.values().sum();
    CorrelatedDistribution::from_entries(n, cells.into_iter().map(|(k, w)| (k, w / total))).unwrap()
}
