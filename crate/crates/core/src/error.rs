use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Numeric payloads are reported as `f64` regardless of the working scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A^H| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("trace {trace} differs from 1")]
    BadTrace { trace: f64 },
    #[error("matrix is not positive semidefinite within {tolerance:e}")]
    NotPositive { tolerance: f64 },
    #[error("qubit index {index} out of range for {qubits} qubits")]
    IndexOutOfRange { index: usize, qubits: usize },
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("operation requires a two-qubit state, got {qubits} qubits")]
    WrongDimension { qubits: usize },
    #[error("angular frequency must be positive, got {0}")]
    InvalidFrequency(f64),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("step budget exceeded: {needed} steps required, {allowed} allowed")]
    StepBudgetExceeded { needed: u64, allowed: u64 },
    #[error("state is not entangled (min partial-transpose eigenvalue {min_eigenvalue:e})")]
    NotEntangled { min_eigenvalue: f64 },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("no product projector found after {trials} trials (best |trace| = {best:e})")]
    SearchExhausted { trials: usize, best: f64 },
    #[error("expression diverges at zero temperature")]
    ZeroTemperature,
    #[error("root bracket not found within horizon {horizon} although the asymptotic value {lambda_at_infinity} is negative")]
    NoConvergence { horizon: f64, lambda_at_infinity: f64 },
    #[error("numerical integrity failure: {0}")]
    NumericalIntegrity(String),
}

impl Error {
    /// True for failures caused by numerical breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::NumericalIntegrity(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
