//! The three algorithm modes: phase readout of `det U` for unitary `U`, the
//! one-qubit sign test for orthogonal `O`, and the post-selected extension
//! to contractions.
//!
//! Every run is simulated exactly; shot sampling only happens at readout.
//! Alongside the sampled histogram each run exposes the exact final
//! distribution it sampled from, which is what the invariant tests check.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::antisym::{asym_state, AsymState};
use crate::error::{Error, Result};
use crate::linalg::{
    block_encode, det_lu, mat_pow2, polar_decompose, unitarity_defect, ComplexMatrix,
    CONTRACTION_SLACK,
};
use crate::simulator::measure::ancilla_outcome;
use crate::simulator::rng::{sample_index, shot_stream, uniform};
use crate::simulator::{
    init_state, CostCounters, Histogram, QubitLayout, Register, StateVector, DEFAULT_QUBIT_CAP,
};

/// Tolerance for the unitary / orthogonal checks done before simulating.
pub const VALIDATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunParams {
    pub t: u32,
    pub shots: u64,
    pub seed: u64,
    pub qubit_cap: u32,
}

impl RunParams {
    pub fn new(t: u32, shots: u64, seed: u64) -> Self {
        Self {
            t,
            shots,
            seed,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }

    pub fn with_qubit_cap(mut self, qubit_cap: u32) -> Self {
        self.qubit_cap = qubit_cap;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.t == 0 || self.t > 62 {
            return Err(Error::InvalidArgument(format!("t = {} outside 1..=62", self.t)));
        }
        if self.shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sampled phase readout.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEstimate {
    /// Modal outcome; ties go to the smaller value.
    pub k_prime: u64,
    pub t: u32,
    pub phi_hat: f64,
    pub histogram: Histogram,
}

impl PhaseEstimate {
    /// `None` when the histogram is empty.
    pub fn from_histogram(histogram: Histogram, t: u32) -> Option<Self> {
        let mut best: Option<(u64, u64)> = None;
        for (&k, &count) in &histogram {
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((k, count));
            }
        }
        let (k_prime, _) = best?;
        Some(Self {
            k_prime,
            t,
            phi_hat: phase_from_k(k_prime, t).expect("histogram keys lie on the grid"),
            histogram,
        })
    }

    pub fn shots(&self) -> u64 {
        self.histogram.values().sum()
    }

    pub fn frequency(&self, k: u64) -> f64 {
        self.histogram.get(&k).copied().unwrap_or(0) as f64 / self.shots() as f64
    }
}

/// `2πk / 2^t`.
pub fn phase_from_k(k: u64, t: u32) -> Result<f64> {
    if t > 63 || k >= 1u64 << t {
        return Err(Error::InvalidArgument(format!("k = {k} is not a {t}-bit value")));
    }
    Ok(TAU * k as f64 / (1u64 << t) as f64)
}

/// Distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Index of the largest entry, ties toward the smaller index.
pub fn argmax(probs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > probs[best] {
            best = i;
        }
    }
    best
}

fn prepare(layout: QubitLayout, qubit_cap: u32, asym: &AsymState) -> Result<StateVector> {
    let mut sv = init_state(layout, qubit_cap)?;
    sv.load_asym(asym)?;
    sv.hadamard_layer();
    Ok(sv)
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let deviation = unitarity_defect(u)?;
    if deviation > VALIDATION_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct QdeRun {
    pub estimate: PhaseEstimate,
    /// Exact distribution of the phase register just before readout.
    pub exact_distribution: Vec<f64>,
    pub counters: CostCounters,
    /// Overlap of the final Register-2 state with the initial antisymmetric
    /// state.
    pub slot_fidelity: f64,
}

/// Phase estimation of `det u` on the antisymmetric state.
pub fn qde_run(u: &ComplexMatrix, params: &RunParams) -> Result<QdeRun> {
    params.validate()?;
    let n = u.dim()?;
    check_unitary(u)?;
    let layout = QubitLayout::new(params.t, n, false, params.qubit_cap)?;
    let asym = asym_state(n)?;
    let mut sv = prepare(layout, params.qubit_cap, &asym)?;
    for m in 0..params.t {
        sv.controlled_power_stage(m, &mat_pow2(u, m)?)?;
    }
    sv.inverse_qft();
    let histogram = sv.measure_register(Register::Phase, params.seed, params.shots);
    Ok(QdeRun {
        estimate: PhaseEstimate::from_histogram(histogram, params.t)
            .expect("at least one shot was sampled"),
        exact_distribution: sv.register_distribution(Register::Phase),
        counters: *sv.counters(),
        slot_fidelity: sv.slot_fidelity(&asym),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignResult {
    pub sign: i8,
    pub shots: u64,
    pub unanimous: bool,
}

#[derive(Debug, Clone)]
pub struct SignRun {
    pub result: SignResult,
    /// Exact probability of the outcome that was observed.
    pub exact_majority_probability: f64,
    pub counters: CostCounters,
}

/// One-qubit phase kickback of `det O = ±1`: readout 0 means `+1`.
pub fn sign_run(o: &ComplexMatrix, shots: u64, seed: u64, qubit_cap: u32) -> Result<SignRun> {
    RunParams::new(1, shots, seed).validate()?;
    let n = o.dim()?;
    let deviation = (&o.transpose() * o)
        .max_abs_diff(&ComplexMatrix::identity(n))
        .max(o.max_imag());
    if deviation > VALIDATION_TOL {
        return Err(Error::NotOrthogonal { deviation });
    }
    let layout = QubitLayout::new(1, n, false, qubit_cap)?;
    let mut sv = prepare(layout, qubit_cap, &asym_state(n)?)?;
    sv.controlled_power_stage(0, o)?;
    // For a single qubit the inverse QFT is exactly the closing Hadamard.
    sv.inverse_qft();
    let probs = sv.register_distribution(Register::Phase);
    let histogram = sv.measure_register(Register::Phase, seed, shots);
    if histogram.len() != 1 {
        return Err(Error::Inconsistent(format!(
            "sign readout split {histogram:?}; input is not orthogonal within tolerance"
        )));
    }
    let outcome = *histogram.keys().next().expect("non-empty histogram");
    Ok(SignRun {
        result: SignResult {
            sign: if outcome == 0 { 1 } else { -1 },
            shots,
            unanimous: true,
        },
        exact_majority_probability: probs[outcome as usize],
        counters: *sv.counters(),
    })
}

/// How each stage of the contraction circuit realizes `U(A^{2^m})`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ContractionCircuit {
    /// Polar split `A^{2^m} = W_m P_m`: the block encoding of `P_m^{⊗N}` acts
    /// on Register 2 and ancilla `m` unconditionally, then `W_m` is applied
    /// slot by slot under control of phase qubit `m`. On the antisymmetric
    /// state each stage passes with probability `|det A|^{2^{m+1}}` whatever
    /// the control value, and the surviving branch carries the phase of
    /// `det(A)^{2^m}` only where the control is set.
    #[default]
    MagnitudeSplit,
    /// The whole block encoding of `(A^{2^m})^{⊗N}` under control of phase
    /// qubit `m`. Branches with the control off never leak, so acceptance is
    /// `2^{-t} Σ_j |det A|^{2j}` and the accepted phase register carries
    /// amplitude weights `|det A|^j`.
    FullyControlled,
}

impl ContractionCircuit {
    pub fn name(&self) -> &'static str {
        match self {
            ContractionCircuit::MagnitudeSplit => "split",
            ContractionCircuit::FullyControlled => "controlled",
        }
    }
}

impl fmt::Display for ContractionCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ContractionCircuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(ContractionCircuit::MagnitudeSplit),
            "controlled" => Ok(ContractionCircuit::FullyControlled),
            other => Err(Error::Usage(format!(
                "unknown contraction circuit '{other}' (expected split or controlled)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionResult {
    pub accepted: u64,
    pub attempted: u64,
    pub acceptance_rate: f64,
    /// `None` when no shot was accepted.
    pub phase: Option<PhaseEstimate>,
    pub magnitude_estimate: f64,
    /// `|det A|^{2(2^t-1)}` from the LU determinant.
    pub predicted_acceptance: f64,
}

impl ContractionResult {
    pub fn no_accepted_shots(&self) -> bool {
        self.accepted == 0
    }
}

#[derive(Debug, Clone)]
pub struct ContractionRun {
    pub result: ContractionResult,
    pub circuit: ContractionCircuit,
    /// Exact probability that every ancilla reads 0.
    pub exact_acceptance: f64,
    /// Conditional probability of ancilla `m` reading 0 given earlier passes.
    pub stage_acceptance: Vec<f64>,
    /// Exact phase-register distribution of accepted shots; empty when no
    /// shot can be accepted.
    pub conditioned_distribution: Vec<f64>,
    pub counters: CostCounters,
}

/// `(accepted / attempted)^{1 / (2(2^t - 1))}`, the inverse of the all-zero
/// acceptance law.
pub fn magnitude_estimate(accepted: u64, attempted: u64, t: u32) -> f64 {
    assert!(attempted >= 1, "magnitude_estimate needs at least one attempt");
    if accepted == 0 {
        return 0.0;
    }
    let rate = accepted as f64 / attempted as f64;
    rate.powf(1.0 / acceptance_exponent(t)).clamp(0.0, 1.0)
}

fn acceptance_exponent(t: u32) -> f64 {
    2.0 * ((2.0f64).powi(t as i32) - 1.0)
}

/// Post-selected phase estimation for a contraction `a`.
pub fn contraction_run(
    a: &ComplexMatrix,
    params: &RunParams,
    circuit: ContractionCircuit,
) -> Result<ContractionRun> {
    params.validate()?;
    let n = a.dim()?;
    let norm = a.operator_norm();
    if norm > 1.0 + CONTRACTION_SLACK {
        return Err(Error::NotAContraction { norm });
    }
    let layout = QubitLayout::new(params.t, n, true, params.qubit_cap)?;
    let asym = asym_state(n)?;
    let mut sv = prepare(layout, params.qubit_cap, &asym)?;

    // The accepted branch is deterministic, so it is simulated once and
    // each shot only replays the ancilla decisions against its probabilities.
    let mut stage_acceptance = Vec::with_capacity(params.t as usize);
    let mut alive = true;
    for m in 0..params.t {
        if !alive {
            stage_acceptance.push(0.0);
            continue;
        }
        let a_m = mat_pow2(a, m)?;
        match circuit {
            ContractionCircuit::MagnitudeSplit => {
                let (w_m, p_m) = polar_decompose(&a_m)?;
                sv.ancilla_block_stage(m, &block_encode(&p_m.kron_power(n))?)?;
                sv.controlled_power_stage(m, &w_m)?;
            }
            ContractionCircuit::FullyControlled => {
                sv.controlled_block_stage(m, &block_encode(&a_m.kron_power(n))?)?;
            }
        }
        let p0 = sv.ancilla_probability(m, 0)?;
        stage_acceptance.push(p0);
        match sv.project_ancilla(m, 0) {
            Ok((_, collapsed)) => sv = collapsed,
            Err(_) => alive = false,
        }
    }
    let conditioned_distribution = if alive {
        sv.inverse_qft();
        sv.register_distribution(Register::Phase)
    } else {
        Vec::new()
    };
    let exact_acceptance: f64 = stage_acceptance.iter().product();

    let (accepted, histogram) = sample_post_selected(
        &stage_acceptance,
        &conditioned_distribution,
        params.seed,
        params.shots,
    );
    let det = det_lu(a)?;
    let result = ContractionResult {
        accepted,
        attempted: params.shots,
        acceptance_rate: accepted as f64 / params.shots as f64,
        phase: PhaseEstimate::from_histogram(histogram, params.t),
        magnitude_estimate: magnitude_estimate(accepted, params.shots, params.t),
        predicted_acceptance: det.magnitude.powf(acceptance_exponent(params.t)),
    };
    Ok(ContractionRun {
        result,
        circuit,
        exact_acceptance,
        stage_acceptance,
        conditioned_distribution,
        counters: *sv.counters(),
    })
}

fn sample_post_selected(
    stage_acceptance: &[f64],
    conditioned: &[f64],
    seed: u64,
    shots: u64,
) -> (u64, Histogram) {
    (0..shots)
        .into_par_iter()
        .filter_map(|s| {
            let mut rng = shot_stream(seed, s);
            for &p0 in stage_acceptance {
                let draw = uniform(&mut rng);
                if ancilla_outcome(p0, 1.0 - p0, draw) == 1 {
                    return None;
                }
            }
            Some(sample_index(conditioned, uniform(&mut rng)) as u64)
        })
        .fold(
            || (0u64, Histogram::new()),
            |(n, mut h), k| {
                *h.entry(k).or_insert(0) += 1;
                (n + 1, h)
            },
        )
        .reduce(
            || (0u64, Histogram::new()),
            |(na, mut ha), (nb, hb)| {
                for (k, v) in hb {
                    *ha.entry(k).or_insert(0) += v;
                }
                (na + nb, ha)
            },
        )
}
