//! `warmq` command-line front-end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 numerical-integrity failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{finite, resolve_bath, resolve_seed, Cli, Command, FileSettings, Format, StateSpec};
use warmq::neighborhood::DiagonalTarget;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation failed")]
    Validation,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = cli.common;
    let file = match &c.config {
        Some(p) => FileSettings::load(p)?,
        None => FileSettings::default(),
    };
    let gamma = file.pick(c.gamma, "gamma")?;
    let nbar = file.pick(c.nbar, "nbar")?;
    let omega = file.pick(c.omega, "omega")?;
    let kt = file.pick(c.kt, "kt")?;
    let qubits = file.pick(c.qubits, "qubits")?.unwrap_or(2);
    let state: Option<StateSpec> = file.pick(c.state.map(|s| s.parse()).transpose().map_err(CliError::Config)?, "state")?;
    let points = file.pick(c.points, "points")?.unwrap_or(101);
    let output = file.pick(c.output, "output")?;
    let seed = resolve_seed(file.pick(c.seed, "seed")?)?;
    let format_flag = file.pick(c.format, "format")?;
    let json_default = format_flag.unwrap_or(Format::Json);

    let text = match cli.command {
        Command::Steady => commands::steady(&resolve_bath(gamma, nbar, omega, kt)?, qubits, json_default)?,
        Command::Trajectory => {
            let bath = resolve_bath(gamma, nbar, omega, kt)?;
            let state = state.unwrap_or(StateSpec::Bell(warmq::esd::BellSign::Plus));
            let rho0 = state.build(qubits, bath.nbar)?;
            commands::trajectory_cmd(&rho0, &state, &bath, points, format_flag.unwrap_or(Format::Csv))?
        }
        Command::Esd { tol } => {
            let bath = resolve_bath(gamma, nbar, omega, kt)?;
            let state = state.unwrap_or(StateSpec::Bell(warmq::esd::BellSign::Plus));
            let rho0 = state.build(qubits, bath.nbar)?;
            commands::esd(&rho0, &state, &bath, finite("tol", file.pick(tol, "tol")?)?, json_default)?
        }
        Command::Neighborhood { epsilon, samples, restarts } => {
            let target = match state.unwrap_or(StateSpec::Thermal) {
                StateSpec::Thermal => {
                    let bath = resolve_bath(gamma, nbar, omega, kt)?;
                    DiagonalTarget::thermal(qubits, bath.nbar).map_err(|e| CliError::Config(e.to_string()))?
                }
                StateSpec::Diagonal(p) => {
                    if p.len() != 1 << qubits {
                        return Err(CliError::Config(format!("diagonal needs {} entries", 1usize << qubits)));
                    }
                    DiagonalTarget::new(p).map_err(|e| CliError::Config(e.to_string()))?
                }
                other => return Err(CliError::Config(format!("neighborhood needs a diagonal target, got {other}"))),
            };
            let epsilon = finite("epsilon", file.pick(epsilon, "epsilon")?)?.unwrap_or(0.01);
            let samples = file.pick(samples, "samples")?.unwrap_or(10_000);
            let restarts = file.pick(restarts, "restarts")?.unwrap_or(8);
            commands::neighborhood(&target, epsilon, samples, restarts, seed, json_default)?
        }
        Command::Validate { grid, inject_rate_error } => {
            let grid_text = file.pick(grid, "grid")?.unwrap_or_else(|| "0,0.5,1,2".to_string());
            let grid = parse_grid(&grid_text)?;
            let gamma = finite("gamma", gamma)?.unwrap_or(1.0);
            if !(gamma > 0.0) {
                return Err(CliError::Config(format!("--gamma must be positive, got {gamma}")));
            }
            let report = commands::validate(&grid, gamma, inject_rate_error.unwrap_or(0.0), seed)?;
            output::emit(&commands::validation_json(&report, json_default)?, output.as_deref())?;
            return if report.passed { Ok(()) } else { Err(CliError::Validation) };
        }
    };
    output::emit(&text, output.as_deref())
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| CliError::Config(format!("grid value `{s}`: {e}"))))
        .collect()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("warmq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
