//! Two-level atoms in a warm bosonic bath: density matrices, the thermal
//! amplitude-damping channel, a Lindblad reference integrator, and
//! entanglement diagnostics built on top of them.
//!
//! Linear algebra, the channel and the metrics are generic over [`Real`]
//! (`f32` or `f64`); the aliases below fix the scalar to `f64`, which is what
//! the sudden-death and neighborhood analyses use.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod densmat;
pub mod error;
pub mod esd;
pub mod lindblad;
pub mod metrics;
pub mod neighborhood;
pub mod scalar;
pub mod tolerance;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexMatrix = densmat::ComplexSquareMatrix<f64>;
pub type DensityMatrix = densmat::DensityMatrix<f64>;
pub type ProductProjector = densmat::ProductProjector<f64>;
pub type BathSpec = channel::BathSpec<f64>;
pub type ChannelCoefficients = channel::ChannelCoefficients<f64>;
pub type KrausQuartet = channel::KrausQuartet<f64>;
pub type ThermalState = channel::ThermalState<f64>;
pub type LindbladSpec = lindblad::LindbladSpec<f64>;
pub type StepControl = lindblad::StepControl<f64>;
pub type LambdaReport = metrics::LambdaReport<f64>;
pub type Witness = metrics::Witness<f64>;
pub type ProbeOutcome = metrics::ProbeOutcome<f64>;
