//! Report types and their JSON form.
//!
//! Floats are written with 17 significant digits in scientific notation so
//! that a report pins every value bit for bit.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::linalg::{DetValue, C64};
use crate::simulator::{CostCounters, Histogram};

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        RawValue::from_string(format_real(*x))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    } else {
        s.serialize_none()
    }
}

fn real_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => real(x, s),
        None => s.serialize_none(),
    }
}

struct Real(f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        real(&self.0, s)
    }
}

fn complex<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&Real(z.re))?;
    seq.serialize_element(&Real(z.im))?;
    seq.end()
}

fn real_map<S: Serializer>(m: &BTreeMap<u64, f64>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &Real(*v))?;
    }
    map.end()
}

/// A determinant in the report: `[re, im]`, modulus and phase in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleDet {
    #[serde(serialize_with = "complex")]
    pub value: C64,
    #[serde(serialize_with = "real")]
    pub magnitude: f64,
    #[serde(serialize_with = "real")]
    pub phase: f64,
}

impl From<DetValue> for OracleDet {
    fn from(d: DetValue) -> Self {
        Self {
            value: d.value,
            magnitude: d.magnitude,
            phase: d.phase,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub mode: String,
    pub matrix: Option<String>,
    pub t: u32,
    pub shots: u64,
    pub seed: u64,
    pub qubit_cap: u32,
    #[serde(serialize_with = "real")]
    pub verify_tolerance: f64,
    pub verify_n: usize,
    pub verify_count: usize,
    pub circuit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    pub k_prime: u64,
    pub t: u32,
    #[serde(serialize_with = "real")]
    pub phi_hat: f64,
    pub shots: u64,
    pub histogram: Histogram,
    #[serde(serialize_with = "real_map")]
    pub frequencies: BTreeMap<u64, f64>,
}

impl PhaseReport {
    pub fn new(estimate: &crate::qde::PhaseEstimate) -> Self {
        let shots = estimate.shots();
        Self {
            k_prime: estimate.k_prime,
            t: estimate.t,
            phi_hat: estimate.phi_hat,
            shots,
            histogram: estimate.histogram.clone(),
            frequencies: estimate
                .histogram
                .iter()
                .map(|(&k, &c)| (k, c as f64 / shots as f64))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QdeReport {
    #[serde(flatten)]
    pub phase: PhaseReport,
    /// Exact probability of the reported `k_prime`.
    #[serde(serialize_with = "real")]
    pub exact_mode_probability: f64,
    #[serde(serialize_with = "real")]
    pub slot_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignReport {
    pub sign: i8,
    pub shots: u64,
    pub unanimous: bool,
    #[serde(serialize_with = "real")]
    pub exact_majority_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractReport {
    pub circuit: String,
    pub accepted: u64,
    pub attempted: u64,
    #[serde(serialize_with = "real")]
    pub acceptance_rate: f64,
    #[serde(serialize_with = "real")]
    pub exact_acceptance: f64,
    #[serde(serialize_with = "real")]
    pub predicted_acceptance: f64,
    #[serde(serialize_with = "real")]
    pub magnitude_estimate: f64,
    pub no_accepted_shots: bool,
    pub phase: Option<PhaseReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub family: String,
    pub count: usize,
    /// Largest `‖A^{⊗N}|ASYM> - det(A)|ASYM>‖_max` over the family.
    #[serde(serialize_with = "real")]
    pub max_residual: f64,
    /// Largest `|det_lu - det_levi_civita|` over the family.
    #[serde(serialize_with = "real")]
    pub max_oracle_gap: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    #[serde(serialize_with = "real")]
    pub tolerance: f64,
    pub families: Vec<VerifyRow>,
    #[serde(serialize_with = "real")]
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub det_lu: OracleDet,
    pub det_levi_civita: Option<OracleDet>,
    #[serde(serialize_with = "real_opt")]
    pub oracle_gap: Option<f64>,
    #[serde(serialize_with = "real")]
    pub unitarity_defect: f64,
    #[serde(serialize_with = "real")]
    pub operator_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModeResult {
    Qde(QdeReport),
    Sign(SignReport),
    Contract(ContractReport),
    Verify(VerifyReport),
    Oracle(OracleReport),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub result: ModeResult,
    /// LU determinant of the input matrix; `None` only for verify runs
    /// without an explicit matrix.
    pub oracle: Option<OracleDet>,
    pub counters: CostCounters,
    pub disagreement: bool,
    #[serde(serialize_with = "real")]
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
