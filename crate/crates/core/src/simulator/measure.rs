use std::collections::BTreeMap;

use rayon::prelude::*;

use super::rng::{sample_index, shot_stream, uniform};
use super::{Register, StateVector};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Register value -> number of shots that produced it.
pub type Histogram = BTreeMap<u64, u64>;

// Below this a branch is treated as impossible.
const ZERO_PROBABILITY: f64 = 1e-300;

impl StateVector {
    /// Exact Born distribution of one register, marginalizing the others.
    pub fn register_distribution(&self, which: Register) -> Vec<f64> {
        let mut probs = vec![0.0; 1usize << self.layout.register_bits(which)];
        for (i, z) in self.amps.iter().enumerate() {
            probs[self.layout.register_value(i, which)] += z.norm_sqr();
        }
        probs
    }

    /// Samples `shots` independent readouts of `which`. The state is left
    /// untouched; shot `s` uses random stream `s` of `seed`.
    pub fn measure_register(&self, which: Register, seed: u64, shots: u64) -> Histogram {
        let probs = self.register_distribution(which);
        sample_histogram(&probs, seed, shots)
    }

    /// Probability that ancilla `index` reads `bit`.
    pub fn ancilla_probability(&self, index: u32, bit: u8) -> Result<f64> {
        let mask = self.ancilla_mask(index)?;
        let want = if bit == 0 { 0 } else { mask };
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, z)| z.norm_sqr())
            .sum())
    }

    /// Projects ancilla `index` onto `bit` and renormalizes. Returns the
    /// probability of that outcome with the collapsed state.
    pub fn project_ancilla(&self, index: u32, bit: u8) -> Result<(f64, StateVector)> {
        let mask = self.ancilla_mask(index)?;
        let prob = self.ancilla_probability(index, bit)?;
        if prob < ZERO_PROBABILITY {
            return Err(Error::InvalidState(format!(
                "ancilla {index} cannot read {bit} (probability {prob:e})"
            )));
        }
        let want = if bit == 0 { 0 } else { mask };
        let scale = 1.0 / prob.sqrt();
        let mut collapsed = self.clone();
        for (i, z) in collapsed.amps.iter_mut().enumerate() {
            if i & mask == want {
                *z *= scale;
            } else {
                *z = C64::default();
            }
        }
        Ok((prob, collapsed))
    }

    /// Mid-circuit measurement of ancilla `index` driven by a uniform `draw`
    /// in `[0, 1)`: the outcome is 0 when `draw < P(0)`.
    pub fn measure_ancilla_postselect(
        &self,
        index: u32,
        draw: f64,
    ) -> Result<(u8, StateVector, f64)> {
        let p0 = self.ancilla_probability(index, 0)?;
        let p1 = self.ancilla_probability(index, 1)?;
        if p0 < ZERO_PROBABILITY && p1 < ZERO_PROBABILITY {
            return Err(Error::InvalidState("state has zero norm".into()));
        }
        let bit = ancilla_outcome(p0, p1, draw);
        let (prob, collapsed) = self.project_ancilla(index, bit)?;
        Ok((bit, collapsed, prob))
    }

    fn ancilla_mask(&self, index: u32) -> Result<usize> {
        if index >= self.layout.ancilla_count {
            return Err(Error::InvalidArgument(format!(
                "ancilla {index} does not exist ({} ancillas)",
                self.layout.ancilla_count
            )));
        }
        Ok(1usize << self.layout.ancilla_qubit(index))
    }
}

/// Outcome rule shared by single measurements and batched shot sampling.
pub(crate) fn ancilla_outcome(p0: f64, p1: f64, draw: f64) -> u8 {
    if p1 < ZERO_PROBABILITY {
        0
    } else if p0 < ZERO_PROBABILITY {
        1
    } else if draw * (p0 + p1) < p0 {
        0
    } else {
        1
    }
}

/// Draws `shots` samples of `probs`, one counter-based stream per shot.
/// Counts are merged through ordered maps, so the result does not depend on
/// how rayon splits the work.
pub fn sample_histogram(probs: &[f64], seed: u64, shots: u64) -> Histogram {
    (0..shots)
        .into_par_iter()
        .map(|s| sample_index(probs, uniform(&mut shot_stream(seed, s))) as u64)
        .fold(Histogram::new, |mut h, k| {
            *h.entry(k).or_insert(0) += 1;
            h
        })
        .reduce(Histogram::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        })
}
