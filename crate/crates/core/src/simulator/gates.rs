use std::f64::consts::FRAC_1_SQRT_2;

use rustfft::FftPlanner;

use super::StateVector;
use crate::error::{Error, Result};
use crate::linalg::{unitarity_defect, ComplexMatrix, C64};

const BLOCK_UNITARY_TOL: f64 = 1e-9;

pub type Gate1 = [[C64; 2]; 2];

pub fn hadamard() -> Gate1 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

impl StateVector {
    /// Applies a 2x2 gate to one qubit.
    pub fn apply_single_qubit(&mut self, qubit: u32, gate: &Gate1) {
        let bit = 1usize << qubit;
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                continue;
            }
            let a0 = self.amps[i];
            let a1 = self.amps[i | bit];
            self.amps[i] = gate[0][0] * a0 + gate[0][1] * a1;
            self.amps[i | bit] = gate[1][0] * a0 + gate[1][1] * a1;
        }
    }

    /// `H` on every phase qubit; this is the QFT of `|0…0>`.
    pub fn hadamard_layer(&mut self) {
        let h = hadamard();
        for q in 0..self.layout.t {
            self.apply_single_qubit(q, &h);
        }
        self.counters.modeled_qft_ops += u64::from(self.layout.t);
    }

    fn check_stage(&self, m: u32) -> Result<()> {
        if m >= self.layout.t {
            return Err(Error::InvalidArgument(format!(
                "stage {m} has no control qubit (t = {})",
                self.layout.t
            )));
        }
        Ok(())
    }

    /// Conditioned on phase qubit `m`, applies `u_m` to each slot in turn.
    pub fn controlled_power_stage(&mut self, m: u32, u_m: &ComplexMatrix) -> Result<()> {
        self.check_stage(m)?;
        let n = self.layout.n_particles;
        let dim = u_m.dim()?;
        if dim != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: dim,
            });
        }
        for slot in 0..n {
            self.apply_slot_matrix(slot, u_m, Some(m));
            self.counters.controlled_slot_applications += 1;
        }
        Ok(())
    }

    fn apply_slot_matrix(&mut self, slot: usize, u: &ComplexMatrix, control: Option<u32>) {
        let n = self.layout.n_particles;
        let offset = self.layout.slot_offset(slot);
        let slot_mask = (n - 1) << offset;
        let control_mask = control.map_or(0, |m| 1usize << m);
        let mut gathered = vec![C64::default(); n];
        for base in 0..self.amps.len() {
            if base & slot_mask != 0 || base & control_mask != control_mask {
                continue;
            }
            for (label, g) in gathered.iter_mut().enumerate() {
                *g = self.amps[base | (label << offset)];
            }
            for (label, out) in u.apply(&gathered).into_iter().enumerate() {
                self.amps[base | (label << offset)] = out;
            }
        }
    }

    /// Conditioned on phase qubit `m`, applies `v_m` to Register 2 joined
    /// with ancilla `m` (the ancilla is the most significant index of `v_m`).
    ///
    /// Booked as `N` controlled slot applications, the same as a unitary
    /// stage, since `v_m` encodes the `N`-fold tensor power.
    pub fn controlled_block_stage(&mut self, m: u32, v_m: &ComplexMatrix) -> Result<()> {
        self.check_stage(m)?;
        self.apply_ancilla_block(m, v_m, true)?;
        self.counters.controlled_slot_applications += self.layout.n_particles as u64;
        Ok(())
    }

    /// Unconditional version of [`controlled_block_stage`](Self::controlled_block_stage).
    pub fn ancilla_block_stage(&mut self, m: u32, v_m: &ComplexMatrix) -> Result<()> {
        self.check_stage(m)?;
        self.apply_ancilla_block(m, v_m, false)
    }

    fn apply_ancilla_block(&mut self, m: u32, v: &ComplexMatrix, controlled: bool) -> Result<()> {
        if self.layout.ancilla_count == 0 {
            return Err(Error::InvalidState("layout has no ancilla register".into()));
        }
        let slot_bits = self.layout.slot_register_bits();
        let slot_dim = 1usize << slot_bits;
        let dim = v.dim()?;
        if dim != 2 * slot_dim {
            return Err(Error::DimensionMismatch {
                expected: 2 * slot_dim,
                found: dim,
            });
        }
        let deviation = unitarity_defect(v)?;
        if deviation > BLOCK_UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        let t = self.layout.t;
        let ancilla_bit = 1usize << self.layout.ancilla_qubit(m);
        let slot_mask = (slot_dim - 1) << t;
        let control_mask = if controlled { 1usize << m } else { 0 };
        let mut gathered = vec![C64::default(); 2 * slot_dim];
        for base in 0..self.amps.len() {
            if base & (slot_mask | ancilla_bit) != 0 || base & control_mask != control_mask {
                continue;
            }
            for (j, g) in gathered.iter_mut().enumerate() {
                *g = self.amps[self.joint_index(base, j, slot_dim, ancilla_bit)];
            }
            for (j, out) in v.apply(&gathered).into_iter().enumerate() {
                let idx = self.joint_index(base, j, slot_dim, ancilla_bit);
                self.amps[idx] = out;
            }
        }
        Ok(())
    }

    fn joint_index(&self, base: usize, joint: usize, slot_dim: usize, ancilla_bit: usize) -> usize {
        let slots = joint % slot_dim;
        let anc = if joint >= slot_dim { ancilla_bit } else { 0 };
        base | (slots << self.layout.t) | anc
    }

    /// Inverse QFT on the phase register:
    /// `|j> -> 2^{-t/2} Σ_k e^{-2πi jk/2^t} |k>`.
    pub fn inverse_qft(&mut self) {
        self.phase_fourier(true);
        let t = u64::from(self.layout.t);
        self.counters.modeled_inv_qft_ops += t * (t + 1) / 2;
    }

    /// Forward QFT on the phase register (`e^{+2πi jk/2^t}`). Not booked in
    /// the counters; the algorithm itself only uses the Hadamard layer.
    pub fn qft(&mut self) {
        self.phase_fourier(false);
    }

    fn phase_fourier(&mut self, inverse: bool) {
        // The phase register is the low t bits, so every fibre is a
        // contiguous chunk of 2^t amplitudes.
        let len = 1usize << self.layout.t;
        let mut planner = FftPlanner::<f64>::new();
        let fft = if inverse {
            planner.plan_fft_forward(len)
        } else {
            planner.plan_fft_inverse(len)
        };
        fft.process(&mut self.amps);
        let scale = 1.0 / (len as f64).sqrt();
        for z in &mut self.amps {
            *z *= scale;
        }
    }
}
