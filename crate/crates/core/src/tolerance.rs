//! Fixed numerical tolerances (given for `f64`).

/// Max elementwise |A - A^H| accepted for a density matrix.
pub const HERMITIAN: f64 = 1e-12;
/// Hermiticity accepted by the eigensolver entry point.
pub const EIGEN_HERMITIAN: f64 = 1e-10;
/// |tr(rho) - 1| accepted for a density matrix.
pub const TRACE: f64 = 1e-12;
/// Most negative eigenvalue accepted for a density matrix.
pub const PSD: f64 = 1e-10;
/// Density-matrix eigenvalues in (-DUST, 0) are clamped to zero before the
/// square roots entering Lambda.
pub const DUST: f64 = 1e-10;
/// |Lambda| at or below this is reported as boundary-separable.
pub const BOUNDARY: f64 = 1e-12;
/// |Lambda| at or below this is rounding noise and is returned as exactly zero.
pub const LAMBDA_ROUNDOFF: f64 = 1e-14;
/// A partial-transpose eigenvalue below -NPT certifies entanglement.
pub const NPT: f64 = 1e-10;
/// PSD acceptance for perturbed states in the neighborhood probe.
pub const PERTURB_PSD: f64 = 1e-12;
