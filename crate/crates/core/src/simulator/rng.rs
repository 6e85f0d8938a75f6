//! Counter-based random streams for shot sampling.
//!
//! Shot `s` of a run seeded with `seed` always draws from ChaCha20 stream
//! `s` under key `seed`, so the outcome of a shot does not depend on which
//! thread runs it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn shot_stream(seed: u64, shot: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Uniform draw in `[0, 1)`.
pub fn uniform(rng: &mut ChaCha20Rng) -> f64 {
    rng.random::<f64>()
}

/// Inverse-CDF sample from a (possibly slightly unnormalized) distribution.
pub fn sample_index(probs: &[f64], draw: f64) -> usize {
    let total: f64 = probs.iter().sum();
    let target = draw * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last_nonzero = i;
        if target < acc {
            return i;
        }
    }
    last_nonzero
}
