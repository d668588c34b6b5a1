//! Deterministic random-instance generators shared by the integration suites.
#![allow(dead_code)]

use bilevel_knapsack::rational::{rat, rat_int, rat_u64};
use bilevel_knapsack::{Instance, ItemDistribution, Rat};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_weight(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.random_range(-6..=6), rng.random_range(1..=2))
}

/// Finite-PMF instance with `n <= max_n`, `m_i <= max_m`, `a_i <= max_a`.
/// Realizations may be zero or negative and probabilities are arbitrary
/// positive rationals summing to one.
pub fn random_finite_instance(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_m: usize,
    max_a: u64,
) -> Instance {
    let n = rng.random_range(1..=max_n);
    let a: Vec<u64> = (0..n).map(|_| rng.random_range(1..=max_a)).collect();
    let d: Vec<Rat> = (0..n).map(|_| random_weight(rng)).collect();
    let dists = (0..n)
        .map(|_| {
            let m = rng.random_range(1..=max_m);
            let mut values: Vec<Rat> = Vec::with_capacity(m);
            while values.len() < m {
                let v = rat(rng.random_range(-2..=8), rng.random_range(1..=2));
                if !values.contains(&v) {
                    values.push(v);
                }
            }
            let weights: Vec<u64> = (0..m).map(|_| rng.random_range(1..=4)).collect();
            let total: u64 = weights.iter().sum();
            let probs = weights.iter().map(|&w| rat_u64(w) / rat_u64(total)).collect();
            ItemDistribution::FinitePmf { values, probs }
        })
        .collect();
    let total: u64 = a.iter().sum();
    Instance {
        a,
        d,
        delta: rat(rng.random_range(0..=2), 4),
        b_lo: Rat::zero(),
        b_hi: rat_u64(total),
        dists,
    }
}

/// Uniform-interval instance with `n <= max_n` and `A <= max_total`.
/// About half the intervals straddle zero.
pub fn random_uniform_instance(rng: &mut ChaCha8Rng, max_n: usize, max_total: u64) -> Instance {
    let n = rng.random_range(1..=max_n);
    let per_item = (max_total / n as u64).max(1);
    let a: Vec<u64> = (0..n).map(|_| rng.random_range(1..=per_item)).collect();
    let d: Vec<Rat> = (0..n).map(|_| random_weight(rng)).collect();
    let dists = (0..n)
        .map(|_| {
            let lo = rat(rng.random_range(-2..=4), rng.random_range(1..=2));
            let width = rat(rng.random_range(1..=6), rng.random_range(1..=2));
            let hi = lo.clone() + width;
            ItemDistribution::UniformInterval { lo, hi }
        })
        .collect();
    let total: u64 = a.iter().sum();
    Instance {
        a,
        d,
        delta: rat(rng.random_range(0..=2), 4),
        b_lo: Rat::zero(),
        b_hi: rat_u64(total),
        dists,
    }
}

/// Uniform-interval instance whose total leader weight `D` stays below
/// `max_weight`, for approximation-guarantee experiments.
pub fn random_bounded_weight_instance(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_total: u64,
    max_weight: i64,
) -> Instance {
    let mut inst = random_uniform_instance(rng, max_n, max_total);
    let n = inst.n();
    let cap = max_weight / n as i64;
    inst.d = (0..n)
        .map(|_| rat_int(rng.random_range(-cap.max(1)..=cap.max(1))))
        .collect();
    inst
}
