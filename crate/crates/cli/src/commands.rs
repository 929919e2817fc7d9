//! Subcommand implementations. Each returns the text to emit.

use serde::Serialize;

use warmq::channel::{coefficients, evolve, thermal_state, two_qubit_thermal_probabilities};
use warmq::densmat::{sample_random_density, sample_random_density_with, stream_rng, DensityMatrix};
use warmq::esd::{
    bell_elements, bell_lambda_closed_form, bell_state, numeric_tesd, numeric_tesd_with, tesd_log_estimate,
    trajectory, BellSign, EsdKind, TOLERANCE_SCALED,
};
use warmq::lindblad::{integrate, LindbladSpec, StepControl};
use warmq::metrics::{lambda_value, min_pt_eigenvalue, Separability};
use warmq::neighborhood::{directed_boundary, random_scan, DiagonalTarget, NeighborhoodReport};
use warmq::BathSpec;

use crate::config::{Format, StateSpec};
use crate::output::{float, to_csv, to_json};
use crate::CliError;

pub const TRAJECTORY_HEADER: [&str; 5] = ["t", "omega_t", "lambda", "concurrence", "classification"];

fn core(e: warmq::Error) -> CliError {
    if e.is_numerical() {
        CliError::Numerical(e.to_string())
    } else {
        CliError::Config(e.to_string())
    }
}

fn json_only(format: Format, what: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Config(format!("{what} output is JSON only"))),
    }
}

#[derive(Serialize)]
struct SteadyOutput {
    qubits: usize,
    nbar: f64,
    diagonal: Vec<f64>,
    /// (|++⟩, |+−⟩, |−+⟩, |−−⟩) populations for a pair of qubits.
    two_qubit_probabilities: [f64; 4],
}

pub fn steady(bath: &BathSpec, qubits: usize, format: Format) -> Result<String, CliError> {
    json_only(format, "steady")?;
    let th = thermal_state(qubits, bath.nbar).map_err(core)?;
    to_json(&SteadyOutput {
        qubits,
        nbar: bath.nbar,
        diagonal: th.diagonal(),
        two_qubit_probabilities: two_qubit_thermal_probabilities(bath.nbar),
    })
}

#[derive(Serialize)]
struct TrajectoryRow {
    t: f64,
    t_scaled: f64,
    omega_t: f64,
    lambda: f64,
    concurrence: f64,
    classification: Separability,
}

#[derive(Serialize)]
struct TrajectoryOutput {
    state: String,
    gamma_rate: f64,
    nbar: f64,
    points: Vec<TrajectoryRow>,
}

pub fn trajectory_cmd(
    rho0: &DensityMatrix<f64>,
    state: &StateSpec,
    bath: &BathSpec,
    points: usize,
    format: Format,
) -> Result<String, CliError> {
    if rho0.qubits() != 2 {
        return Err(CliError::Config("trajectory needs a two-qubit state".into()));
    }
    let series = trajectory(rho0, bath, points).map_err(core)?;
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = series
                .iter()
                .map(|p| {
                    vec![
                        float(p.t),
                        float(p.omega_t),
                        float(p.lambda),
                        float(p.concurrence),
                        p.classification.as_str().to_string(),
                    ]
                })
                .collect();
            to_csv(&TRAJECTORY_HEADER, &rows)
        }
        Format::Json => to_json(&TrajectoryOutput {
            state: state.to_string(),
            gamma_rate: bath.gamma_rate,
            nbar: bath.nbar,
            points: series
                .iter()
                .map(|p| TrajectoryRow {
                    t: p.t,
                    t_scaled: bath.scaled_time(p.t),
                    omega_t: p.omega_t,
                    lambda: p.lambda,
                    concurrence: p.concurrence,
                    classification: p.classification,
                })
                .collect(),
        }),
    }
}

#[derive(Serialize)]
struct EsdOutput {
    state: String,
    gamma_rate: f64,
    nbar: f64,
    kind: EsdKind,
    t_esd: Option<f64>,
    t_esd_scaled: Option<f64>,
    gamma_sq_at_esd: Option<f64>,
    /// Closed-form logarithmic estimate of the sudden-death time; null at zero temperature.
    paper_formula_value: Option<f64>,
    already_separable: bool,
    lambda_at_infinity: f64,
    note: String,
}

pub fn esd(
    rho0: &DensityMatrix<f64>,
    state: &StateSpec,
    bath: &BathSpec,
    tol_scaled: Option<f64>,
    format: Format,
) -> Result<String, CliError> {
    json_only(format, "esd")?;
    if rho0.qubits() != 2 {
        return Err(CliError::Config("esd needs a two-qubit state".into()));
    }
    let tol_scaled = tol_scaled.unwrap_or(TOLERANCE_SCALED);
    if !(tol_scaled > 0.0) || !tol_scaled.is_finite() {
        return Err(CliError::Config(format!("--tol must be positive, got {tol_scaled}")));
    }
    let r = numeric_tesd(rho0, bath, tol_scaled / bath.total_rate()).map_err(core)?;
    let estimate = match tesd_log_estimate(bath.nbar, bath.gamma_rate) {
        Ok(v) => Some(v),
        Err(warmq::Error::ZeroTemperature) => None,
        Err(e) => return Err(core(e)),
    };
    let gamma_sq = match r.t_esd {
        Some(t) => Some(coefficients(bath, t).map_err(core)?.gamma_sq()),
        None => None,
    };
    let note = match (r.kind, r.already_separable, estimate, r.t_esd) {
        (EsdKind::Asymptotic, _, _, _) => "Λ stays positive for all finite times; no sudden death".to_string(),
        (_, true, _, _) => "initial state is already separable (Λ ≤ 0)".to_string(),
        (_, _, Some(est), Some(t)) => format!(
            "t_esd is the numerical root of Λ(t); the closed-form log estimate differs from it by a factor {:.4}",
            est / t
        ),
        _ => "t_esd is the numerical root of Λ(t)".to_string(),
    };
    to_json(&EsdOutput {
        state: state.to_string(),
        gamma_rate: bath.gamma_rate,
        nbar: bath.nbar,
        kind: r.kind,
        t_esd: r.t_esd,
        t_esd_scaled: r.t_esd.map(|t| bath.scaled_time(t)),
        gamma_sq_at_esd: gamma_sq,
        paper_formula_value: estimate,
        already_separable: r.already_separable,
        lambda_at_infinity: r.lambda_at_infinity,
        note,
    })
}

#[derive(Serialize)]
struct NeighborhoodOutput {
    target: Vec<f64>,
    seed: u64,
    #[serde(flatten)]
    report: NeighborhoodReport,
}

pub fn neighborhood(
    target: &DiagonalTarget,
    epsilon: f64,
    samples: usize,
    restarts: usize,
    seed: u64,
    format: Format,
) -> Result<String, CliError> {
    json_only(format, "neighborhood")?;
    let mut report = random_scan(target, epsilon, samples, seed).map_err(core)?;
    if restarts > 0 {
        let est = directed_boundary(target, restarts, seed).map_err(core)?;
        report.boundary_estimate = Some(est.radius);
    }
    to_json(&NeighborhoodOutput { target: target.diagonal.clone(), seed, report })
}

#[derive(Serialize)]
pub struct CheckResult {
    name: &'static str,
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, max_deviation: f64, tolerance: f64) -> Self {
        Self { name, max_deviation, tolerance, passed: max_deviation <= tolerance }
    }
}

#[derive(Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    grid: Vec<f64>,
    seed: u64,
    checks: Vec<CheckResult>,
}

/// Number of random states in the Peres/Wootters comparison.
const PT_SAMPLES: u64 = 2000;

fn kraus_vs_lindblad(grid: &[f64], gamma: f64, rate_error: f64, seed: u64) -> Result<(f64, f64), CliError> {
    let states = [bell_state(BellSign::Plus), sample_random_density(1, seed), sample_random_density(2, seed + 1)];
    let mut worst_state: f64 = 0.0;
    let mut worst_root: f64 = 0.0;
    for &nbar in grid {
        let bath = BathSpec::new(gamma, nbar).map_err(core)?;
        let skewed = BathSpec::new(gamma * (1.0 + rate_error), nbar).map_err(core)?;
        let spec = LindbladSpec::rotating(skewed);
        let ctl = StepControl::scaled(0.01, 10_000_000, &skewed).map_err(core)?;
        for rho in &states {
            for k in 0..=10 {
                let t = 0.5 * k as f64 / gamma;
                let a = integrate(rho, &spec, t, &ctl).map_err(core)?;
                let b = evolve(rho, &bath, t).map_err(core)?;
                worst_state = worst_state.max(a.matrix().max_abs_diff(b.matrix()));
            }
        }
        if nbar > 0.0 {
            let tol = 1e-10 / bath.total_rate();
            let kraus = numeric_tesd(&states[0], &bath, tol).map_err(core)?;
            let lind = numeric_tesd_with(&states[0], &bath, tol, |r, t| integrate(r, &spec, t, &ctl)).map_err(core)?;
            match (kraus.t_esd, lind.t_esd) {
                (Some(a), Some(b)) => worst_root = worst_root.max(bath.scaled_time((a - b).abs())),
                _ => worst_root = f64::INFINITY,
            }
        }
    }
    Ok((worst_state, worst_root))
}

fn closed_form_vs_channel(grid: &[f64], gamma: f64) -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    for &nbar in grid {
        let bath = BathSpec::new(gamma, nbar).map_err(core)?;
        for k in 0..=50 {
            let t = 0.1 * k as f64 / gamma;
            let c = coefficients(&bath, t).map_err(core)?;
            for sign in [BellSign::Plus, BellSign::Minus] {
                let rho = evolve(&bell_state(sign), &bath, t).map_err(core)?;
                let l = lambda_value(&rho).map_err(core)?;
                worst = worst.max((l - bell_lambda_closed_form(nbar, &c)).abs());
                worst = worst.max(bell_elements(nbar, &c, sign).to_matrix().max_abs_diff(rho.matrix()));
            }
        }
    }
    Ok(worst)
}

fn peres_vs_wootters(seed: u64) -> Result<f64, CliError> {
    let mut disagreements = 0u64;
    for k in 0..PT_SAMPLES {
        let rho = sample_random_density_with::<f64, _>(2, &mut stream_rng(seed, k));
        let l = lambda_value(&rho).map_err(core)?;
        let pt = min_pt_eigenvalue(&rho, &[1]).map_err(core)?;
        if (l > 1e-9) != (pt < -1e-9) {
            disagreements += 1;
        }
    }
    Ok(disagreements as f64)
}

pub fn validate(grid: &[f64], gamma: f64, rate_error: f64, seed: u64) -> Result<ValidationReport, CliError> {
    if grid.is_empty() {
        return Err(CliError::Config("validation grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|n| !(n.is_finite() && **n >= 0.0)) {
        return Err(CliError::Config(format!("grid occupations must be finite and non-negative, got {bad}")));
    }
    if !rate_error.is_finite() || rate_error <= -1.0 {
        return Err(CliError::Config(format!("rate error must be finite and above -1, got {rate_error}")));
    }
    let (state_dev, root_dev) = kraus_vs_lindblad(grid, gamma, rate_error, seed)?;
    let checks = vec![
        CheckResult::new("kraus_vs_lindblad", state_dev, 1e-6),
        CheckResult::new("esd_root_kraus_vs_lindblad", root_dev, 1e-6),
        CheckResult::new("closed_form_vs_channel", closed_form_vs_channel(grid, gamma)?, 1e-10),
        CheckResult::new("peres_vs_wootters_disagreements", peres_vs_wootters(seed)?, 0.0),
    ];
    Ok(ValidationReport { passed: checks.iter().all(|c| c.passed), grid: grid.to_vec(), seed, checks })
}

pub fn validation_json(report: &ValidationReport, format: Format) -> Result<String, CliError> {
    json_only(format, "validate")?;
    to_json(report)
}
