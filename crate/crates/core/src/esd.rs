//! Bell-state decay, Λ(t) trajectories and entanglement-sudden-death times.

use serde::Serialize;

use crate::channel::{evolve, thermal_state, time_for_omega, two_qubit_thermal_probabilities, BathSpec,
    ChannelCoefficients};
use crate::densmat::{ComplexSquareMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::metrics::{lambda_report, lambda_value, Separability};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BellSign {
    Plus,
    Minus,
}

impl BellSign {
    fn factor(self) -> f64 {
        match self {
            BellSign::Plus => 1.0,
            BellSign::Minus => -1.0,
        }
    }
}

/// |Ψ±⟩ = (|+−⟩ ± |−+⟩)/√2 as a density matrix.
pub fn bell_state(sign: BellSign) -> DensityMatrix<f64> {
    let mut m = ComplexSquareMatrix::<f64>::zeros(4);
    m[(1, 1)].re = 0.5;
    m[(2, 2)].re = 0.5;
    m[(1, 2)].re = 0.5 * sign.factor();
    m[(2, 1)].re = 0.5 * sign.factor();
    DensityMatrix::new_unchecked(m)
}

/// X-shaped mixture `(1/3)[a|++⟩⟨++| + (1−a)|−−⟩⟨−−| + 2|Ψ+⟩⟨Ψ+|]`.
///
/// For `a > 1/3` this family loses its entanglement in finite time even at
/// zero temperature.
pub fn mixed_x_state(excited_weight: f64) -> Result<DensityMatrix<f64>> {
    if !(0.0..=1.0).contains(&excited_weight) {
        return Err(Error::InvalidParameter(format!("weight must be in [0, 1], got {excited_weight}")));
    }
    let mut m = ComplexSquareMatrix::<f64>::zeros(4);
    m[(0, 0)].re = excited_weight / 3.0;
    m[(1, 1)].re = 1.0 / 3.0;
    m[(2, 2)].re = 1.0 / 3.0;
    m[(1, 2)].re = 1.0 / 3.0;
    m[(2, 1)].re = 1.0 / 3.0;
    m[(3, 3)].re = (1.0 - excited_weight) / 3.0;
    DensityMatrix::new(m)
}

/// Member of [`mixed_x_state`] with Λ(0) = 1/2, i.e. `a = (2 + √3)/4`.
pub fn half_lambda_mixed_state() -> DensityMatrix<f64> {
    mixed_x_state((2.0 + 3f64.sqrt()) / 4.0).expect("weight in range")
}

/// Non-zero entries of an evolving Bell state in the standard basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BellElements {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub z: f64,
}

impl BellElements {
    pub fn trace(&self) -> f64 {
        self.a + self.b + self.c + self.d
    }

    pub fn to_matrix(&self) -> ComplexSquareMatrix<f64> {
        let mut m = ComplexSquareMatrix::<f64>::zeros(4);
        m[(0, 0)].re = self.a;
        m[(1, 1)].re = self.b;
        m[(2, 2)].re = self.c;
        m[(3, 3)].re = self.d;
        m[(1, 2)].re = self.z;
        m[(2, 1)].re = self.z;
        m
    }

    /// 2|z| − 2√(ad), valid for X-states with |z| ≤ √(bc).
    pub fn lambda(&self) -> f64 {
        2.0 * self.z.abs() - 2.0 * (self.a * self.d).max(0.0).sqrt()
    }
}

/// Bell-state elements derived from the Kraus channel.
///
/// With `q = n̄/(2n̄+1)`, `u = ω²q` (excited population of an initially
/// ground qubit) and `v = γ² + ω²q` (same for an initially excited qubit):
/// `a = uv`, `d = (1−u)(1−v)`, `b = c = ½[u(1−v) + v(1−u)]`, `z = ±γ²/2`.
pub fn bell_elements(nbar: f64, coeff: &ChannelCoefficients<f64>, sign: BellSign) -> BellElements {
    let q = nbar / (2.0 * nbar + 1.0);
    let (g2, w2) = (coeff.gamma_t * coeff.gamma_t, coeff.omega_t * coeff.omega_t);
    let u = w2 * q;
    let v = g2 + w2 * q;
    let b = 0.5 * (u * (1.0 - v) + v * (1.0 - u));
    BellElements { a: u * v, b, c: b, d: (1.0 - u) * (1.0 - v), z: sign.factor() * 0.5 * g2 }
}

/// Variant of [`bell_elements`] weighted by the two-qubit thermal probabilities.
///
/// Kept for comparison only: it is not trace preserving (at t = 0,
/// `b + c = 2(p₁ + p₂ + 2p₃)`) and its long-time limit of `d` is `p₁`
/// instead of `p₄`.
pub fn bell_elements_weighted(nbar: f64, coeff: &ChannelCoefficients<f64>, sign: BellSign) -> BellElements {
    let [p1, p2, p3, _] = two_qubit_thermal_probabilities(nbar);
    let (g2, w2) = (coeff.gamma_t * coeff.gamma_t, coeff.omega_t * coeff.omega_t);
    let b = p1 * g2 + p2 * g2 + p3 * (g2 * g2 + 1.0 + w2 * w2);
    BellElements {
        a: p2 * w2 + p3 * g2 * w2,
        b,
        c: b,
        d: p1 * w2 + p3 * g2 * w2,
        z: sign.factor() * 0.5 * g2,
    }
}

/// Λ of an evolving Bell state: `γ² − 2√(uv(1−u)(1−v))`.
pub fn bell_lambda_closed_form(nbar: f64, coeff: &ChannelCoefficients<f64>) -> f64 {
    bell_elements(nbar, coeff, BellSign::Plus).lambda()
}

/// Logarithmic ESD estimate `(1/Γ) ln[(1 + 2√(p₁p₂)) / (2√(p₁p₂))]`.
///
/// This expression does not agree with the root of Λ(t) obtained from the
/// channel (for n̄ = 1 it gives 1.43/Γ against 0.31/Γ); it is reported for
/// reference next to [`numeric_tesd`].
pub fn tesd_log_estimate(nbar: f64, gamma_rate: f64) -> Result<f64> {
    if !(gamma_rate > 0.0) {
        return Err(Error::InvalidParameter(format!("decay rate must be positive, got {gamma_rate}")));
    }
    if !(nbar >= 0.0) {
        return Err(Error::InvalidParameter(format!("thermal occupation must be non-negative, got {nbar}")));
    }
    let [p1, p2, _, _] = two_qubit_thermal_probabilities(nbar);
    let s = 2.0 * (p1 * p2).sqrt();
    if s == 0.0 {
        return Err(Error::ZeroTemperature);
    }
    Ok(((1.0 + s) / s).ln() / gamma_rate)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EsdKind {
    Finite,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EsdResult {
    pub kind: EsdKind,
    /// Present iff `kind` is finite.
    pub t_esd: Option<f64>,
    /// Λ of the steady state the trajectory approaches.
    pub lambda_at_infinity: f64,
    /// Λ(0) ≤ 0: reported as finite with `t_esd = 0`.
    pub already_separable: bool,
}

/// Probe horizon, in units of 1/Γ(2n̄+1).
pub const HORIZON_SCALED: f64 = 100.0;
/// Default root tolerance, in units of 1/Γ(2n̄+1).
pub const TOLERANCE_SCALED: f64 = 1e-10;

pub fn default_tolerance(bath: &BathSpec<f64>) -> f64 {
    TOLERANCE_SCALED / bath.total_rate()
}

/// First zero of `t ↦ Λ(evolve(ρ₀, t))` under the Kraus channel.
pub fn numeric_tesd(rho0: &DensityMatrix<f64>, bath: &BathSpec<f64>, tol: f64) -> Result<EsdResult> {
    numeric_tesd_with(rho0, bath, tol, |rho, t| evolve(rho, bath, t))
}

/// Root search against an arbitrary evolution routine.
///
/// Brackets by doubling from `t = 1/Γ(2n̄+1)` up to the probe horizon, then
/// bisects until the bracket is narrower than `tol`. A bracket needs Λ below
/// −1e-12, so a state that only approaches the boundary from above (Bell
/// states at zero temperature) is reported as asymptotic rather than dying
/// where Λ underflows into rounding noise.
pub fn numeric_tesd_with<F>(rho0: &DensityMatrix<f64>, bath: &BathSpec<f64>, tol: f64, evolve_to: F) -> Result<EsdResult>
where
    F: Fn(&DensityMatrix<f64>, f64) -> Result<DensityMatrix<f64>>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("root tolerance must be positive, got {tol}")));
    }
    let lambda_inf = lambda_value(&thermal_state(2, bath.nbar)?.state)?;
    let lambda_at = |t: f64| -> Result<f64> { lambda_value(&evolve_to(rho0, t)?) };

    if lambda_value(rho0)? <= 0.0 {
        return Ok(EsdResult { kind: EsdKind::Finite, t_esd: Some(0.0), lambda_at_infinity: lambda_inf, already_separable: true });
    }

    let rate = bath.total_rate();
    let horizon = HORIZON_SCALED / rate;
    let mut lo = 0.0;
    let mut hi = 1.0 / rate;
    loop {
        if lambda_at(hi)? < -tolerance::BOUNDARY {
            break;
        }
        if hi >= horizon {
            return if lambda_inf >= 0.0 {
                Ok(EsdResult { kind: EsdKind::Asymptotic, t_esd: None, lambda_at_infinity: lambda_inf, already_separable: false })
            } else {
                Err(Error::NoConvergence { horizon, lambda_at_infinity: lambda_inf })
            };
        }
        lo = hi;
        hi = (2.0 * hi).min(horizon);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lambda_at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(EsdResult {
        kind: EsdKind::Finite,
        t_esd: Some(0.5 * (lo + hi)),
        lambda_at_infinity: lambda_inf,
        already_separable: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub omega_t: f64,
    pub lambda: f64,
    pub concurrence: f64,
    pub classification: Separability,
}

/// Largest sampled ω; the grid stops short of t = ∞.
pub const OMEGA_END: f64 = 1.0 - 1e-3;

/// Λ along a grid uniform in ω(t) ∈ [0, 1 − 10⁻³].
pub fn trajectory(rho0: &DensityMatrix<f64>, bath: &BathSpec<f64>, n_points: usize) -> Result<Vec<TrajectoryPoint>> {
    if n_points < 2 {
        return Err(Error::InvalidParameter("a trajectory needs at least two points".into()));
    }
    (0..n_points)
        .map(|k| {
            let omega_t = OMEGA_END * k as f64 / (n_points - 1) as f64;
            let t = time_for_omega(bath, omega_t);
            let report = lambda_report(&evolve(rho0, bath, t)?)?;
            Ok(TrajectoryPoint {
                t,
                omega_t,
                lambda: report.lambda,
                concurrence: report.concurrence,
                classification: report.classification,
            })
        })
        .collect()
}

/// Indices `k` where the sign of Λ changes between points `k` and `k+1`.
pub fn sign_changes(points: &[TrajectoryPoint]) -> Vec<usize> {
    points
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[0].lambda > 0.0) != (w[1].lambda > 0.0))
        .map(|(k, _)| k)
        .collect()
}
