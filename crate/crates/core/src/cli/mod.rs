//! Command-line front end: argument handling, dispatch to the algorithm
//! modes, and JSON reports that always carry the classical determinant.

mod generator;
mod matrix_io;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use crate::antisym::{verify_det_identity, MAX_VERIFY_DIM};
use crate::error::{Error, ErrorKind, Result};
use crate::linalg::{
    det_levi_civita, det_lu, haar_orthogonal, haar_unitary, random_complex, random_contraction,
    unitarity_defect, ComplexMatrix, LEVI_CIVITA_MAX,
};
use crate::qde::{
    circular_distance, contraction_run, qde_run, sign_run, ContractionCircuit, RunParams,
};
use crate::simulator::{CostCounters, DEFAULT_QUBIT_CAP};

pub use generator::{generator_spec, VALID_SPECS};
pub use matrix_io::{matrix_to_json, parse_matrix_file, parse_matrix_str};
pub use report::{
    format_real, ConfigEcho, ContractReport, ModeResult, OracleDet, OracleReport, PhaseReport,
    QdeReport, RunReport, SignReport, VerifyReport, VerifyRow,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_RESOURCE_CAP: i32 = 4;

pub const DEFAULT_VERIFY_TOLERANCE: f64 = 1e-10;

// Grid-step slack for comparing a readout against the oracle phase.
const PHASE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Phase of det(U) for unitary U.
    Qde,
    /// Sign of det(O) for real orthogonal O.
    Sign,
    /// Post-selected phase and magnitude for a contraction.
    Contract,
    /// Brute-force check of the slot-wise determinant identity.
    Verify,
    /// Classical determinants only.
    Oracle,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Qde => "qde",
            Mode::Sign => "sign",
            Mode::Contract => "contract",
            Mode::Verify => "verify",
            Mode::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixSource {
    File(PathBuf),
    Generator(String),
}

impl MatrixSource {
    fn describe(&self) -> String {
        match self {
            MatrixSource::File(p) => format!("file:{}", p.display()),
            MatrixSource::Generator(g) => format!("gen:{g}"),
        }
    }

    pub fn load(&self, seed: u64) -> Result<ComplexMatrix> {
        match self {
            MatrixSource::File(p) => parse_matrix_file(p),
            MatrixSource::Generator(spec) => generator_spec(spec, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub matrix: Option<MatrixSource>,
    pub t: u32,
    pub shots: u64,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub qubit_cap: u32,
    pub verify_tolerance: f64,
    pub verify_n: usize,
    pub verify_count: usize,
    pub circuit: ContractionCircuit,
}

impl RunConfig {
    pub fn new(mode: Mode, matrix: Option<MatrixSource>) -> Self {
        Self {
            mode,
            matrix,
            t: 3,
            shots: 1000,
            seed: 0,
            output_path: None,
            qubit_cap: DEFAULT_QUBIT_CAP,
            verify_tolerance: DEFAULT_VERIFY_TOLERANCE,
            verify_n: 3,
            verify_count: 50,
            circuit: ContractionCircuit::default(),
        }
    }

    /// Checks the invariants and applies mode-specific overrides.
    pub fn normalized(mut self) -> Result<Self> {
        if self.mode == Mode::Sign {
            self.t = 1;
        }
        if self.t == 0 {
            return Err(Error::Usage("--t must be at least 1".into()));
        }
        if self.shots == 0 {
            return Err(Error::Usage("--shots must be at least 1".into()));
        }
        if self.matrix.is_none() && self.mode != Mode::Verify {
            return Err(Error::Usage(format!(
                "mode {} needs --matrix <path> or --gen <spec>",
                self.mode.name()
            )));
        }
        if !(self.verify_tolerance.is_finite() && self.verify_tolerance >= 0.0) {
            return Err(Error::Usage("--verify-tolerance must be a non-negative number".into()));
        }
        Ok(self)
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            mode: self.mode.name().to_string(),
            matrix: self.matrix.as_ref().map(MatrixSource::describe),
            t: self.t,
            shots: self.shots,
            seed: self.seed,
            qubit_cap: self.qubit_cap,
            verify_tolerance: self.verify_tolerance,
            verify_n: self.verify_n,
            verify_count: self.verify_count,
            circuit: self.circuit.name().to_string(),
        }
    }

    fn params(&self) -> RunParams {
        RunParams::new(self.t, self.shots, self.seed).with_qubit_cap(self.qubit_cap)
    }
}

/// Runs one configuration and builds its report. Disagreement with the
/// oracle is reported in the result, not as an error.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let config = config.clone().normalized()?;
    let started = Instant::now();
    let matrix = config
        .matrix
        .as_ref()
        .map(|src| src.load(config.seed))
        .transpose()?;
    let oracle = matrix.as_ref().map(det_lu).transpose()?;
    let grid_step = |t: u32| std::f64::consts::TAU / (1u64 << t) as f64 + PHASE_SLACK;

    let (result, counters, disagreement) = match config.mode {
        Mode::Qde => {
            let u = matrix.as_ref().expect("normalized config has a matrix");
            let det = oracle.expect("oracle computed with matrix");
            let run = qde_run(u, &config.params())?;
            let off = circular_distance(run.estimate.phi_hat, det.phase) > grid_step(config.t);
            let exact_mode_probability = run.exact_distribution[run.estimate.k_prime as usize];
            let report = QdeReport {
                phase: PhaseReport::new(&run.estimate),
                exact_mode_probability,
                slot_fidelity: run.slot_fidelity,
            };
            (ModeResult::Qde(report), run.counters, off)
        }
        Mode::Sign => {
            let o = matrix.as_ref().expect("normalized config has a matrix");
            let det = oracle.expect("oracle computed with matrix");
            let run = sign_run(o, config.shots, config.seed, config.qubit_cap)?;
            let off = run.result.sign != det.real_sign();
            let report = SignReport {
                sign: run.result.sign,
                shots: run.result.shots,
                unanimous: run.result.unanimous,
                exact_majority_probability: run.exact_majority_probability,
            };
            (ModeResult::Sign(report), run.counters, off)
        }
        Mode::Contract => {
            let a = matrix.as_ref().expect("normalized config has a matrix");
            let det = oracle.expect("oracle computed with matrix");
            let run = contraction_run(a, &config.params(), config.circuit)?;
            let r = &run.result;
            let sigma = (run.exact_acceptance * (1.0 - run.exact_acceptance) / r.attempted as f64).sqrt();
            let rate_off = (r.acceptance_rate - run.exact_acceptance).abs() > 5.0 * sigma + 1e-12;
            let law_off = (run.exact_acceptance - r.predicted_acceptance).abs() > 1e-9;
            let phase_off = r
                .phase
                .as_ref()
                .is_some_and(|p| circular_distance(p.phi_hat, det.phase) > grid_step(config.t));
            let report = ContractReport {
                circuit: run.circuit.name().to_string(),
                accepted: r.accepted,
                attempted: r.attempted,
                acceptance_rate: r.acceptance_rate,
                exact_acceptance: run.exact_acceptance,
                predicted_acceptance: r.predicted_acceptance,
                magnitude_estimate: r.magnitude_estimate,
                no_accepted_shots: r.no_accepted_shots(),
                phase: r.phase.as_ref().map(PhaseReport::new),
            };
            (ModeResult::Contract(report), run.counters, rate_off || law_off || phase_off)
        }
        Mode::Verify => {
            let report = verify_suite(&config, matrix.as_ref())?;
            let off = report.families.iter().any(|row| !row.pass);
            (ModeResult::Verify(report), CostCounters::default(), off)
        }
        Mode::Oracle => {
            let a = matrix.as_ref().expect("normalized config has a matrix");
            let det = oracle.expect("oracle computed with matrix");
            let n = a.dim()?;
            let levi = if n <= LEVI_CIVITA_MAX {
                Some(det_levi_civita(a)?)
            } else {
                None
            };
            let gap = levi.map(|l| (l.value - det.value).norm());
            let off = gap.is_some_and(|g| g > 1e-9 * det.magnitude.max(1.0));
            let report = OracleReport {
                n,
                det_lu: det.into(),
                det_levi_civita: levi.map(OracleDet::from),
                oracle_gap: gap,
                unitarity_defect: unitarity_defect(a)?,
                operator_norm: a.operator_norm(),
            };
            (ModeResult::Oracle(report), CostCounters::default(), off)
        }
    };

    Ok(RunReport {
        config: config.echo(),
        result,
        oracle: oracle.map(OracleDet::from),
        counters,
        disagreement,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

fn verify_suite(config: &RunConfig, extra: Option<&ComplexMatrix>) -> Result<VerifyReport> {
    let n = config.verify_n;
    if n == 0 || n > MAX_VERIFY_DIM {
        return Err(Error::Usage(format!("--n must lie in 1..={MAX_VERIFY_DIM}")));
    }
    type Family = (&'static str, fn(usize, u64) -> ComplexMatrix);
    let families: [Family; 4] = [
        ("unitary", haar_unitary),
        ("orthogonal", haar_orthogonal),
        ("contraction", random_contraction),
        ("complex", |n, seed| random_complex(n, n, seed)),
    ];
    let mut rows = Vec::new();
    for (f, (name, make)) in families.iter().enumerate() {
        let matrices = (0..config.verify_count as u64)
            .map(|i| make(n, config.seed.wrapping_add((f as u64) << 32).wrapping_add(i)));
        rows.push(verify_row(name, matrices, config.verify_tolerance)?);
    }
    if let Some(a) = extra {
        rows.push(verify_row("input", std::iter::once(a.clone()), config.verify_tolerance)?);
    }
    let max_residual = rows.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    Ok(VerifyReport {
        n,
        tolerance: config.verify_tolerance,
        families: rows,
        max_residual,
    })
}

fn verify_row(
    family: &str,
    matrices: impl Iterator<Item = ComplexMatrix>,
    tolerance: f64,
) -> Result<VerifyRow> {
    let mut count = 0;
    let mut max_residual: f64 = 0.0;
    let mut max_oracle_gap: f64 = 0.0;
    for a in matrices {
        let lu = det_lu(&a)?;
        let lc = det_levi_civita(&a)?;
        max_residual = max_residual.max(verify_det_identity(&a)?);
        max_oracle_gap = max_oracle_gap.max((lu.value - lc.value).norm() / lu.magnitude.max(1.0));
        count += 1;
    }
    Ok(VerifyRow {
        family: family.to_string(),
        count,
        max_residual,
        max_oracle_gap,
        // Same relative tolerance as the oracle self-consistency property.
        pass: max_residual <= tolerance && max_oracle_gap <= 1e-9,
    })
}

/// Command-line arguments of the `qde` binary.
#[derive(Debug, Parser)]
#[command(name = "qde", version, about = "Quantum determinant estimation, simulated exactly")]
pub struct Args {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// JSON matrix file.
    #[arg(long, conflicts_with = "gen")]
    pub matrix: Option<PathBuf>,
    /// Generator spec: haar-unitary:N, haar-orthogonal:N, diag-phase:N:k:t,
    /// scaled-identity:N:r:theta.
    #[arg(long)]
    pub gen: Option<String>,
    /// Phase-register qubits (forced to 1 in sign mode).
    #[arg(long, default_value_t = 3)]
    pub t: u32,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_QUBIT_CAP)]
    pub qubit_cap: u32,
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOLERANCE)]
    pub verify_tolerance: f64,
    /// Matrix dimension for verify mode.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Matrices per family in verify mode.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Contraction circuit variant: split or controlled.
    #[arg(long, default_value = "split")]
    pub circuit: ContractionCircuit,
}

impl Args {
    pub fn into_config(self) -> RunConfig {
        let matrix = match (self.matrix, self.gen) {
            (Some(path), _) => Some(MatrixSource::File(path)),
            (None, Some(spec)) => Some(MatrixSource::Generator(spec)),
            (None, None) => None,
        };
        RunConfig {
            mode: self.mode,
            matrix,
            t: self.t,
            shots: self.shots,
            seed: self.seed,
            output_path: self.out,
            qubit_cap: self.qubit_cap,
            verify_tolerance: self.verify_tolerance,
            verify_n: self.n,
            verify_count: self.count,
            circuit: self.circuit,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        ErrorKind::Validation | ErrorKind::Io => EXIT_VALIDATION,
        ErrorKind::Verification => EXIT_DISAGREEMENT,
        ErrorKind::ResourceCap => EXIT_RESOURCE_CAP,
    }
}

/// Runs the binary's logic and returns the process exit code. Errors go to
/// stderr as `error[<code>]: <message>`.
pub fn execute(args: Args) -> i32 {
    let config = args.into_config();
    let outcome = run(&config).and_then(|report| {
        let text = report.to_json();
        match &config.output_path {
            Some(path) => std::fs::write(path, &text)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(report.disagreement)
    });
    match outcome {
        Ok(false) => EXIT_OK,
        Ok(true) => EXIT_DISAGREEMENT,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.code());
            exit_code(&err)
        }
    }
}
