//! Exact dense state-vector simulation of the phase register, the slot
//! register and (optionally) one ancilla per phase qubit.
//!
//! Bit layout of a basis index, least significant first:
//!
//! ```text
//! [ phase: t bits | slot 0: n bits | … | slot N-1: n bits | ancillas: 0 or t bits ]
//! ```
//!
//! with `n = log2(N)`. A slot holds its label in plain binary, so the slot
//! register value equals `Σ_j ℓ_j N^j`, the same ordering
//! [`SlotState::to_dense`](crate::antisym::SlotState::to_dense) uses.

mod gates;
pub(crate) mod measure;
pub mod rng;

use crate::antisym::{dense_index, AsymState};
use crate::error::{Error, Result};
use crate::linalg::C64;

pub use gates::{hadamard, Gate1};
pub use measure::{sample_histogram, Histogram};

pub const DEFAULT_QUBIT_CAP: u32 = 26;

/// How the qubits of a run are split between registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitLayout {
    t: u32,
    n_particles: usize,
    bits_per_slot: u32,
    ancilla_count: u32,
}

impl QubitLayout {
    /// `with_ancillas` adds one ancilla per phase qubit.
    pub fn new(t: u32, n_particles: usize, with_ancillas: bool, qubit_cap: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidArgument("phase register needs t >= 1".into()));
        }
        if n_particles < 2 || !n_particles.is_power_of_two() {
            return Err(Error::Encoding {
                n_particles,
                reason: "slot encoding needs N = 2^n with n >= 1".into(),
            });
        }
        let layout = Self {
            t,
            n_particles,
            bits_per_slot: n_particles.trailing_zeros(),
            ancilla_count: if with_ancillas { t } else { 0 },
        };
        layout.check_cap(qubit_cap)?;
        Ok(layout)
    }

    pub fn check_cap(&self, qubit_cap: u32) -> Result<()> {
        let required = self.total_qubits();
        if required > qubit_cap {
            return Err(Error::StateTooLarge {
                required,
                cap: qubit_cap,
            });
        }
        Ok(())
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn bits_per_slot(&self) -> u32 {
        self.bits_per_slot
    }

    pub fn ancilla_count(&self) -> u32 {
        self.ancilla_count
    }

    pub fn slot_register_bits(&self) -> u32 {
        self.n_particles as u32 * self.bits_per_slot
    }

    /// Saturates instead of overflowing so absurd requests still produce a
    /// readable cap error.
    pub fn total_qubits(&self) -> u32 {
        (self.n_particles as u64 * self.bits_per_slot as u64)
            .saturating_add(self.t as u64 + self.ancilla_count as u64)
            .min(u32::MAX as u64) as u32
    }

    /// Bit position of the lowest qubit of slot `j`.
    pub fn slot_offset(&self, j: usize) -> u32 {
        self.t + j as u32 * self.bits_per_slot
    }

    pub fn ancilla_qubit(&self, m: u32) -> u32 {
        self.t + self.slot_register_bits() + m
    }

    pub fn register_value(&self, index: usize, which: Register) -> usize {
        match which {
            Register::Phase => index & ((1 << self.t) - 1),
            Register::Slots => (index >> self.t) & ((1 << self.slot_register_bits()) - 1),
            Register::Ancillas => index >> (self.t + self.slot_register_bits()),
        }
    }

    pub fn register_bits(&self, which: Register) -> u32 {
        match which {
            Register::Phase => self.t,
            Register::Slots => self.slot_register_bits(),
            Register::Ancillas => self.ancilla_count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Register {
    /// Register 1: the `t` phase (control) qubits.
    Phase,
    /// Register 2: `N` slots of `log2 N` qubits.
    Slots,
    /// Register 3: one ancilla per phase qubit, contraction mode only.
    Ancillas,
}

/// Exact tallies of what a run did, plus the modeled gate counts of the
/// steps the simulator performs by direct assignment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct CostCounters {
    pub controlled_slot_applications: u64,
    pub modeled_orthonorm_ops: u64,
    pub modeled_asym_ops: u64,
    pub modeled_qft_ops: u64,
    pub modeled_inv_qft_ops: u64,
}

impl CostCounters {
    /// `⌈N log2(N/e)⌉`, floored at `N`.
    pub fn orthonorm_cost(n: usize) -> u64 {
        let nf = n as f64;
        let stirling = (nf * (nf / std::f64::consts::E).log2()).ceil();
        (stirling.max(nf)) as u64
    }

    /// `⌈N log2² N⌉`.
    pub fn asym_cost(n: usize) -> u64 {
        let nf = n as f64;
        (nf * nf.log2().powi(2)).ceil() as u64
    }
}

/// Amplitudes over the full register layout.
#[derive(Clone, Debug)]
pub struct StateVector {
    layout: QubitLayout,
    amps: Vec<C64>,
    counters: CostCounters,
}

/// All-zeros basis state on `layout`, after rechecking the qubit cap.
pub fn init_state(layout: QubitLayout, qubit_cap: u32) -> Result<StateVector> {
    layout.check_cap(qubit_cap)?;
    Ok(StateVector::new(layout))
}

impl StateVector {
    pub fn new(layout: QubitLayout) -> Self {
        let mut amps = vec![C64::default(); 1usize << layout.total_qubits()];
        amps[0] = C64::new(1.0, 0.0);
        Self {
            layout,
            amps,
            counters: CostCounters::default(),
        }
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn counters(&self) -> &CostCounters {
        &self.counters
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Replaces the all-zeros Register 2 with the antisymmetric state.
    pub fn load_asym(&mut self, s: &AsymState) -> Result<()> {
        let n = self.layout.n_particles;
        if s.n_particles() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.n_particles(),
            });
        }
        let is_initial = (self.amps[0] - C64::new(1.0, 0.0)).norm() < 1e-12
            && self.amps[1..].iter().all(|z| z.norm() < 1e-12);
        if !is_initial {
            return Err(Error::InvalidState(
                "antisymmetric state must be loaded into the all-zeros state".into(),
            ));
        }
        self.amps[0] = C64::default();
        let shift = self.layout.t;
        for (labels, amp) in s.iter() {
            self.amps[dense_index(labels, n) << shift] = amp;
        }
        self.counters.modeled_orthonorm_ops += CostCounters::orthonorm_cost(n);
        self.counters.modeled_asym_ops += CostCounters::asym_cost(n);
        Ok(())
    }

    /// Overlap `<ASYM|ρ_slots|ASYM>` of the reduced Register-2 state.
    pub fn slot_fidelity(&self, s: &AsymState) -> f64 {
        let reference = s.to_dense();
        let slot_bits = self.layout.slot_register_bits();
        let t = self.layout.t;
        let outer = 1usize << (self.layout.total_qubits() - slot_bits);
        let low_mask = (1usize << t) - 1;
        (0..outer)
            .map(|o| {
                let base = (o & low_mask) | ((o >> t) << (t + slot_bits));
                let overlap: C64 = reference
                    .iter()
                    .enumerate()
                    .map(|(r, a)| a.conj() * self.amps[base | (r << t)])
                    .sum();
                overlap.norm_sqr()
            })
            .sum()
    }
}
