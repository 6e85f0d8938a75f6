//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use qde_core::antisym::{apply_slotwise, asym_state, verify_det_identity};
use qde_core::cli::{self, Mode, MatrixSource, RunConfig};
use qde_core::linalg::{det_lu, haar_orthogonal, haar_unitary, random_complex, ComplexMatrix, C64};
use qde_core::qde::{circular_distance, contraction_run, qde_run, sign_run, ContractionCircuit, RunParams};
use qde_core::simulator::DEFAULT_QUBIT_CAP;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn diag_phase(n: usize, k: u64, t: u32) -> ComplexMatrix {
    let mut diag = vec![C64::new(1.0, 0.0); n];
    diag[0] = C64::from_polar(1.0, TAU * k as f64 / (1u64 << t) as f64);
    ComplexMatrix::from_diagonal(&diag)
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn determinant_identity() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        for i in 0..50 {
            let a = random_complex(n, n, 1000 * n as u64 + i);
            worst = worst.max(verify_det_identity(&a).expect("verify runs"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && elapsed < Duration::from_secs(5),
        format!("max residual {worst:.3e} (<= 1e-10), runtime {:.2}s (< 5s)", secs(elapsed)),
    )
}

fn eigenstate_property() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [2, 4] {
        let asym = asym_state(n).unwrap();
        for seed in 0..20 {
            let u = haar_unitary(n, 2000 + seed);
            let det = det_lu(&u).unwrap().value;
            let lhs = apply_slotwise(&u, &asym).unwrap().to_dense();
            let rhs = asym.scaled(det).to_dense();
            let norm = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(norm);
        }
    }
    outcome(worst <= 1e-10, format!("max ||U^(xN)|ASYM> - det U |ASYM>|| = {worst:.3e} (<= 1e-10)"))
}

fn dyadic_exactness(counter_log: &mut Vec<(u64, u64)>) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut min_prob: f64 = 1.0;
    for t in 1..=4u32 {
        for k0 in 0..(1u64 << t) {
            let u = diag_phase(2, k0, t);
            let run = qde_run(&u, &RunParams::new(t, 200, k0)).unwrap();
            counter_log.push((run.counters.controlled_slot_applications, t as u64 * 2));
            let p = run.exact_distribution[k0 as usize];
            min_prob = min_prob.min(p);
            if run.estimate.k_prime != k0 || run.estimate.frequency(k0) != 1.0 || p < 1.0 - 1e-9 {
                failures.push(format!("t={t} k0={k0}"));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(10),
        format!(
            "30 cases, failures {:?}, min exact probability {min_prob:.12}, runtime {:.2}s (< 10s)",
            failures,
            secs(elapsed)
        ),
    )
}

fn concentration_bound(counter_log: &mut Vec<(u64, u64)>) -> Outcome {
    let t = 5u32;
    let grid = (1u64 << t) as f64;
    let bound = 4.0 / (PI * PI) - 1e-9;
    let mut min_prob: f64 = 1.0;
    let mut max_mode_gap: f64 = 0.0;
    for seed in 0..20 {
        let u = haar_unitary(2, 3000 + seed);
        let phase = det_lu(&u).unwrap().phase;
        let run = qde_run(&u, &RunParams::new(t, 2000, seed)).unwrap();
        counter_log.push((run.counters.controlled_slot_applications, t as u64 * 2));
        let nearest = ((phase / TAU * grid).round() as u64) % (1u64 << t);
        min_prob = min_prob.min(run.exact_distribution[nearest as usize]);
        max_mode_gap = max_mode_gap.max(circular_distance(run.estimate.phi_hat, phase));
    }
    let step = TAU / grid;
    outcome(
        min_prob >= bound && max_mode_gap <= step + 1e-9,
        format!(
            "min nearest-point probability {min_prob:.6} (>= {bound:.6}), max mode distance {max_mode_gap:.4} (<= {step:.4})"
        ),
    )
}

fn counter_exactness(counter_log: &mut Vec<(u64, u64)>) -> Outcome {
    for (t, n) in [(1u32, 2usize), (3, 2), (6, 2), (1, 4), (3, 4), (4, 4)] {
        let u = haar_unitary(n, 4000 + t as u64);
        let run = qde_run(&u, &RunParams::new(t, 10, 0)).unwrap();
        counter_log.push((run.counters.controlled_slot_applications, t as u64 * n as u64));
    }
    let bad: Vec<_> = counter_log.iter().filter(|(got, want)| got != want).collect();
    outcome(
        bad.is_empty(),
        format!("{} unitary-mode runs, mismatches {:?}", counter_log.len(), bad),
    )
}

fn sign_certainty() -> Outcome {
    let mut matches = 0;
    let mut total = 0;
    let mut unanimous = true;
    let mut worst: f64 = 0.0;
    for n in [2, 4] {
        for seed in 0..100 {
            let o = haar_orthogonal(n, 5000 + seed);
            let oracle = det_lu(&o).unwrap().real_sign();
            let run = sign_run(&o, 50, seed, DEFAULT_QUBIT_CAP).unwrap();
            total += 1;
            unanimous &= run.result.unanimous;
            matches += (run.result.sign == oracle) as usize;
            worst = worst.max((run.exact_majority_probability - 1.0).abs());
        }
    }
    outcome(
        unanimous && matches == total && worst <= 1e-12,
        format!("{matches}/{total} match oracle, unanimous {unanimous}, max |P_majority - 1| {worst:.3e} (<= 1e-12)"),
    )
}

fn contraction_acceptance() -> Outcome {
    let a = ComplexMatrix::identity(2).scale(C64::new(0.9, 0.0));
    let run = contraction_run(&a, &RunParams::new(2, 10_000, 7), ContractionCircuit::MagnitudeSplit).unwrap();
    let p = 0.81f64.powi(6);
    let exact_gap = (run.exact_acceptance - p).abs();
    let band = 3.0 * (p * (1.0 - p) / 1e4).sqrt();
    let rate_gap = (run.result.acceptance_rate - p).abs();
    let mag_gap = (run.result.magnitude_estimate - 0.81).abs();
    outcome(
        exact_gap <= 1e-9 && rate_gap <= band && mag_gap <= 0.02,
        format!(
            "exact {:.9} vs {p:.9} (gap {exact_gap:.2e}), rate {:.4} (gap {rate_gap:.4} <= {band:.4}), magnitude {:.4} (gap {mag_gap:.4} <= 0.02)",
            run.exact_acceptance, run.result.acceptance_rate, run.result.magnitude_estimate
        ),
    )
}

fn post_selected_phase() -> Outcome {
    let a = ComplexMatrix::identity(2).scale(C64::from_polar(0.95, PI / 4.0));
    let run = contraction_run(&a, &RunParams::new(2, 2000, 11), ContractionCircuit::MagnitudeSplit).unwrap();
    let exact = run.conditioned_distribution[1];
    let point_mass = run
        .result
        .phase
        .as_ref()
        .is_some_and(|p| p.histogram.len() == 1 && p.k_prime == 1);
    outcome(
        point_mass && exact >= 1.0 - 1e-9,
        format!(
            "accepted {} of {}, histogram {:?}, exact conditioned P(k'=1) {exact:.12}",
            run.result.accepted,
            run.result.attempted,
            run.result.phase.as_ref().map(|p| &p.histogram)
        ),
    )
}

fn report_without_timing(config: &RunConfig) -> String {
    let mut report = cli::run(config).expect("run succeeds");
    report.wall_time_ms = 0.0;
    report.to_json()
}

fn reproducibility() -> Outcome {
    let gen = |mode, spec: &str| RunConfig::new(mode, Some(MatrixSource::Generator(spec.into())));
    let mut configs = vec![
        gen(Mode::Qde, "haar-unitary:4"),
        gen(Mode::Sign, "haar-orthogonal:4"),
        gen(Mode::Contract, "scaled-identity:2:0.9:0.3"),
        gen(Mode::Oracle, "haar-unitary:3"),
        RunConfig::new(Mode::Verify, None),
    ];
    configs[0].t = 4;
    configs[0].shots = 5000;
    configs[0].seed = 17;
    configs[2].t = 3;
    configs[2].shots = 20_000;
    configs[2].seed = 5;

    let pool = |threads| rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let mut differing = Vec::new();
    for config in &configs {
        let first = report_without_timing(config);
        let second = report_without_timing(config);
        let one = pool(1).install(|| report_without_timing(config));
        let four = pool(4).install(|| report_without_timing(config));
        if first != second || first != one || first != four {
            differing.push(config.mode.name());
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} configs, repeated and on 1/4-thread pools; differing modes {:?}", configs.len(), differing),
    )
}

fn main() {
    let mut counter_log = Vec::new();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("determinant identity", determinant_identity()),
        ("eigenstate property", eigenstate_property()),
        ("dyadic exactness", dyadic_exactness(&mut counter_log)),
        ("QPE concentration bound", concentration_bound(&mut counter_log)),
        ("counter exactness", counter_exactness(&mut counter_log)),
        ("orthogonal sign certainty", sign_certainty()),
        ("contraction acceptance", contraction_acceptance()),
        ("post-selected phase", post_selected_phase()),
        ("reproducibility", reproducibility()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in criteria.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("acceptance {} {tag} {name}: {}", i + 1, o.detail);
        failed += (!o.pass) as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
