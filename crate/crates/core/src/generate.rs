//! Seeded random instances.
//!
//! The generator is fixed so that instances, and therefore traces, are
//! reproducible from `(n, k, seed, support)`:
//!
//! - RNG: ChaCha8 seeded with `ChaCha8Rng::seed_from_u64(seed)`.
//! - For every `(s, a)` in row-major order: draw `support` distinct
//!   successor states uniformly without replacement, draw an integer weight
//!   in `1..=10` for each, and set `p(t) = w_t / Σ w`. Then draw an integer
//!   `q` in `0..=10` and set the reward to `q / 10`.
//! - The discount is `9/10`; use [`Mdp::with_discount`] to change it.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mdp::Mdp;
use crate::rational::{from_ints, Rational};

pub const WEIGHT_MAX: i64 = 10;
pub const REWARD_DENOMINATOR: i64 = 10;

pub fn default_discount() -> Rational {
    from_ints(9, 10)
}

pub fn generate_random_mdp(n: usize, k: usize, seed: u64, support: usize) -> Result<Mdp> {
    if n < 1 || k < 2 || support < 1 || support > n {
        return Err(Error::OutOfRange(format!(
            "need n ≥ 1, k ≥ 2 and 1 ≤ support ≤ n; got n = {n}, k = {k}, support = {support}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transitions = Vec::with_capacity(n);
    let mut rewards = Vec::with_capacity(n);
    for _ in 0..n {
        let mut rows = Vec::with_capacity(k);
        let mut state_rewards = Vec::with_capacity(k);
        for _ in 0..k {
            let targets = index::sample(&mut rng, n, support).into_vec();
            let weights: Vec<i64> = (0..support).map(|_| rng.gen_range(1..=WEIGHT_MAX)).collect();
            let total: i64 = weights.iter().sum();
            let mut row = alloc::vec![Rational::zero(); n];
            for (t, w) in targets.into_iter().zip(weights) {
                row[t] = from_ints(w, total);
            }
            rows.push(row);
            state_rewards.push(from_ints(rng.gen_range(0..=REWARD_DENOMINATOR), REWARD_DENOMINATOR));
        }
        transitions.push(rows);
        rewards.push(state_rewards);
    }
    Mdp::new(transitions, rewards, default_discount())
}

/// A policy drawn uniformly from `{0..k}^n` with its own ChaCha8 stream.
pub fn random_policy(n: usize, k: usize, seed: u64) -> crate::mdp::Policy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    crate::mdp::Policy::new((0..n).map(|_| rng.gen_range(0..k)).collect())
}
