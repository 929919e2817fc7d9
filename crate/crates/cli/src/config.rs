//! Command-line and config-file settings, resolved into validated inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use warmq::channel::{nbar_from_temperature, thermal_state};
use warmq::densmat::{sample_random_density, DensityMatrix};
use warmq::esd::{bell_state, half_lambda_mixed_state, BellSign};
use warmq::BathSpec;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "warmq", version, about = "Qubits in a thermal bath: steady states, entanglement decay and sudden death")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Thermal steady state and its two-qubit population table.
    Steady,
    /// Λ, concurrence and classification on a grid uniform in ω(t).
    Trajectory,
    /// Entanglement sudden-death time of a two-qubit state.
    Esd {
        /// Root tolerance in units of 1/Γ(2n̄+1).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Monte-Carlo and directed search around a diagonal state.
    Neighborhood {
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Directed-search restarts; 0 skips the boundary estimate.
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Cross-check the channel against the integrator, closed forms and PT tests.
    Validate {
        /// Comma-separated bath occupations.
        #[arg(long)]
        grid: Option<String>,
        /// Relative error added to the integrator's decay rate (harness self-test).
        #[arg(long, hide = true)]
        inject_rate_error: Option<f64>,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Bare decay rate Γ.
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Mean bath occupation n̄.
    #[arg(long, global = true)]
    pub nbar: Option<f64>,
    /// Qubit frequency, used with --kt in place of --nbar.
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Bath temperature k_B·T, in the same units as --omega.
    #[arg(long, global = true)]
    pub kt: Option<f64>,
    #[arg(long, global = true)]
    pub qubits: Option<usize>,
    /// bell+ | bell- | thermal | mixed | diagonal:<p0,p1,...> | random:<seed>
    #[arg(long, global = true)]
    pub state: Option<String>,
    #[arg(long, global = true)]
    pub points: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

const FILE_KEYS: &[&str] = &[
    "gamma", "nbar", "omega", "kt", "qubits", "state", "points", "format", "seed", "output", "tol", "epsilon",
    "samples", "restarts", "grid",
];

/// Settings read from a `--config` file.
#[derive(Debug, Default)]
pub struct FileSettings(BTreeMap<String, String>);

impl FileSettings {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", n + 1)))?;
            let key = key.trim().replace('-', "_");
            if !FILE_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("config line {}: unknown key `{key}`", n + 1)));
            }
            map.insert(key, value.trim().to_string());
        }
        Ok(Self(map))
    }

    /// Flag value if given, else the file value parsed as `T`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| CliError::Config(format!("config key `{key}`: {e}"))),
        }
    }
}

pub fn finite(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !x.is_finite() => Err(CliError::Config(format!("--{name} must be finite, got {x}"))),
        other => Ok(other),
    }
}

/// Bath resolved from either n̄ or an (ω, kT) pair.
pub fn resolve_bath(gamma: Option<f64>, nbar: Option<f64>, omega: Option<f64>, kt: Option<f64>) -> Result<BathSpec, CliError> {
    let gamma = finite("gamma", gamma)?.unwrap_or(1.0);
    let nbar = match (finite("nbar", nbar)?, finite("omega", omega)?, finite("kt", kt)?) {
        (Some(n), None, None) => n,
        (None, Some(w), Some(t)) => nbar_from_temperature(w, t).map_err(|e| CliError::Config(e.to_string()))?,
        (None, None, None) => return Err(CliError::Config("give either --nbar or both --omega and --kt".into())),
        (Some(_), _, _) => return Err(CliError::Config("--nbar cannot be combined with --omega/--kt".into())),
        _ => return Err(CliError::Config("--omega and --kt must be given together".into())),
    };
    BathSpec::new(gamma, nbar).map_err(|e| CliError::Config(e.to_string()))
}

pub fn resolve_seed(seed: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("WARMQ_SEED") {
        Ok(v) => v.trim().parse().map_err(|e| CliError::Config(format!("WARMQ_SEED: {e}"))),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::Config(format!("WARMQ_SEED: {e}"))),
    }
}

/// Initial-state selector.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Bell(BellSign),
    Thermal,
    Mixed,
    Diagonal(Vec<f64>),
    Random(u64),
}

impl FromStr for StateSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s {
            "bell+" => return Ok(Self::Bell(BellSign::Plus)),
            "bell-" | "bell\u{2212}" => return Ok(Self::Bell(BellSign::Minus)),
            "thermal" => return Ok(Self::Thermal),
            "mixed" => return Ok(Self::Mixed),
            _ => {}
        }
        if let Some(list) = s.strip_prefix("diagonal:") {
            let values = list
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| format!("diagonal entry `{v}`: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err("diagonal entries must be finite".into());
            }
            return Ok(Self::Diagonal(values));
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed.trim().parse().map(Self::Random).map_err(|e| format!("random seed `{seed}`: {e}"));
        }
        Err(format!("unknown state `{s}`; expected bell+, bell-, thermal, mixed, diagonal:<csv> or random:<seed>"))
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bell(BellSign::Plus) => f.write_str("bell+"),
            Self::Bell(BellSign::Minus) => f.write_str("bell-"),
            Self::Thermal => f.write_str("thermal"),
            Self::Mixed => f.write_str("mixed"),
            Self::Diagonal(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "diagonal:{}", parts.join(","))
            }
            Self::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl StateSpec {
    pub fn build(&self, qubits: usize, nbar: f64) -> Result<DensityMatrix<f64>, CliError> {
        let two_only = |what: &str| {
            if qubits == 2 {
                Ok(())
            } else {
                Err(CliError::Config(format!("{what} needs --qubits 2, got {qubits}")))
            }
        };
        if qubits == 0 || qubits > 12 {
            return Err(CliError::Config(format!("--qubits must be between 1 and 12, got {qubits}")));
        }
        match self {
            Self::Bell(sign) => {
                two_only("a Bell state")?;
                Ok(bell_state(*sign))
            }
            Self::Mixed => {
                two_only("the mixed state")?;
                Ok(half_lambda_mixed_state())
            }
            Self::Thermal => Ok(thermal_state(qubits, nbar).map_err(|e| CliError::Config(e.to_string()))?.state),
            Self::Diagonal(p) => {
                if p.len() != 1 << qubits {
                    return Err(CliError::Config(format!(
                        "diagonal has {} entries, {qubits} qubits need {}",
                        p.len(),
                        1usize << qubits
                    )));
                }
                DensityMatrix::from_diagonal(p).map_err(|e| CliError::Config(e.to_string()))
            }
            Self::Random(seed) => Ok(sample_random_density(qubits, *seed)),
        }
    }
}
