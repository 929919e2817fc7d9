//! Thermal master equation integrated with classical fourth-order Runge–Kutta.
//!
//! This module is an independent cross-check of the Kraus channel: it builds
//! full-space jump operators and never touches the channel code path.

use serde::Serialize;

use crate::channel::{evolve, BathSpec};
use crate::densmat::{pauli, tensor_all, ComplexSquareMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cplx, lit, to_f64, Real};

/// Bath plus optional qubit frequencies (empty = rotating frame).
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladSpec<T: Real> {
    pub bath: BathSpec<T>,
    pub qubit_frequencies: Vec<T>,
}

impl<T: Real> LindbladSpec<T> {
    pub fn rotating(bath: BathSpec<T>) -> Self {
        Self { bath, qubit_frequencies: Vec::new() }
    }

    pub fn with_frequencies(bath: BathSpec<T>, qubit_frequencies: Vec<T>) -> Result<Self> {
        if qubit_frequencies.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("qubit frequencies must be finite".into()));
        }
        Ok(Self { bath, qubit_frequencies })
    }
}

/// Fixed RK4 step size and step budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl<T: Real> {
    pub dt: T,
    pub max_steps: u64,
}

/// Largest accepted `dt·Γ(2n̄+1)`.
pub const MAX_SCALED_STEP: f64 = 0.05;

impl<T: Real> StepControl<T> {
    pub fn new(dt: T, max_steps: u64, bath: &BathSpec<T>) -> Result<Self> {
        if !(dt > T::zero()) || max_steps == 0 {
            return Err(Error::InvalidParameter("step size and budget must be positive".into()));
        }
        if dt * bath.total_rate() > lit::<T>(MAX_SCALED_STEP) * (T::one() + T::epsilon() * lit::<T>(8.0)) {
            return Err(Error::InvalidParameter(format!(
                "dt·Γ(2n̄+1) = {} exceeds {MAX_SCALED_STEP}",
                dt * bath.total_rate()
            )));
        }
        Ok(Self { dt, max_steps })
    }

    /// Step with `dt·Γ(2n̄+1) = scaled`.
    pub fn scaled(scaled: T, max_steps: u64, bath: &BathSpec<T>) -> Result<Self> {
        Self::new(scaled / bath.total_rate(), max_steps, bath)
    }
}

/// Precomputed full-space operators for one qubit.
struct Channel<T: Real> {
    jump: ComplexSquareMatrix<T>,
    jump_adj: ComplexSquareMatrix<T>,
    /// C†C
    number: ComplexSquareMatrix<T>,
}

/// Generator `ρ ↦ −i[H, ρ] + Σ_i Γ(n̄+1)D[σ₋⁽ⁱ⁾]ρ + Γn̄D[σ₊⁽ⁱ⁾]ρ`,
/// with `D[C]ρ = CρC† − ½{C†C, ρ}`.
pub struct Liouvillian<T: Real> {
    dim: usize,
    hamiltonian: Option<ComplexSquareMatrix<T>>,
    channels: Vec<Channel<T>>,
}

fn embed<T: Real>(op: &ComplexSquareMatrix<T>, qubit: usize, qubits: usize) -> ComplexSquareMatrix<T> {
    let factors: Vec<_> =
        (0..qubits).map(|q| if q == qubit { op.clone() } else { ComplexSquareMatrix::identity(2) }).collect();
    tensor_all(&factors)
}

impl<T: Real> Liouvillian<T> {
    pub fn new(spec: &LindbladSpec<T>, qubits: usize) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        if !spec.qubit_frequencies.is_empty() && spec.qubit_frequencies.len() != qubits {
            return Err(Error::DimensionMismatch { expected: qubits, found: spec.qubit_frequencies.len() });
        }
        let BathSpec { gamma_rate, nbar } = spec.bath;
        let emission = (gamma_rate * (nbar + T::one())).sqrt();
        let absorption = (gamma_rate * nbar).sqrt();
        let mut channels = Vec::new();
        for q in 0..qubits {
            for (op, amp) in [(pauli::lowering::<T>(), emission), (pauli::raising::<T>(), absorption)] {
                if amp == T::zero() {
                    continue;
                }
                let jump = embed(&op, q, qubits).scale(amp);
                let jump_adj = jump.adjoint();
                let number = jump_adj.matmul(&jump);
                channels.push(Channel { jump, jump_adj, number });
            }
        }
        let hamiltonian = if spec.qubit_frequencies.iter().all(|w| *w == T::zero()) {
            None
        } else {
            let half = lit::<T>(0.5);
            let mut h = ComplexSquareMatrix::zeros(1 << qubits);
            for (q, &w) in spec.qubit_frequencies.iter().enumerate() {
                h = &h + &embed(&pauli::z::<T>(), q, qubits).scale(half * w);
            }
            Some(h)
        };
        Ok(Self { dim: 1 << qubits, hamiltonian, channels })
    }

    /// dρ/dt for any square matrix of the right size (need not be a state).
    pub fn apply(&self, rho: &ComplexSquareMatrix<T>) -> ComplexSquareMatrix<T> {
        assert_eq!(rho.dim(), self.dim, "dimension mismatch");
        let half = lit::<T>(0.5);
        let mut out = ComplexSquareMatrix::zeros(self.dim);
        if let Some(h) = &self.hamiltonian {
            let comm = &h.matmul(rho) - &rho.matmul(h);
            out = &out + &comm.scale_complex(cplx(T::zero(), -T::one()));
        }
        for c in &self.channels {
            let sandwich = c.jump.matmul(rho).matmul(&c.jump_adj);
            let anti = &c.number.matmul(rho) + &rho.matmul(&c.number);
            out = &(&out + &sandwich) - &anti.scale(half);
        }
        out
    }
}

/// Right-hand side of the master equation at `rho`.
pub fn liouvillian_rhs<T: Real>(rho: &ComplexSquareMatrix<T>, spec: &LindbladSpec<T>) -> Result<ComplexSquareMatrix<T>> {
    let qubits = crate::densmat::qubits_for_dim(rho.dim())?;
    Ok(Liouvillian::new(spec, qubits)?.apply(rho))
}

fn rk4_step<T: Real>(l: &Liouvillian<T>, y: &ComplexSquareMatrix<T>, h: T) -> ComplexSquareMatrix<T> {
    let half = h * lit(0.5);
    let k1 = l.apply(y);
    let k2 = l.apply(&(y + &k1.scale(half)));
    let k3 = l.apply(&(y + &k2.scale(half)));
    let k4 = l.apply(&(y + &k3.scale(h)));
    let sixth = h / lit(6.0);
    let third = h / lit(3.0);
    let incr = &(&k1.scale(sixth) + &k2.scale(third)) + &(&k3.scale(third) + &k4.scale(sixth));
    y + &incr
}

/// Integrate from 0 to `t`; the step is shrunk so the grid lands exactly on `t`.
pub fn integrate<T: Real>(
    rho0: &DensityMatrix<T>,
    spec: &LindbladSpec<T>,
    t: T,
    ctl: &StepControl<T>,
) -> Result<DensityMatrix<T>> {
    if !(t >= T::zero()) {
        return Err(Error::NegativeTime(to_f64(t)));
    }
    if t == T::zero() {
        return Ok(rho0.clone());
    }
    let steps_f = (t / ctl.dt).ceil();
    let steps = steps_f.to_u64().unwrap_or(u64::MAX).max(1);
    if steps > ctl.max_steps {
        return Err(Error::StepBudgetExceeded { needed: steps, allowed: ctl.max_steps });
    }
    let h = t / T::from_u64(steps).unwrap();
    let l = Liouvillian::new(spec, rho0.qubits())?;
    let mut y = rho0.matrix().clone();
    let mut worst_drift = T::zero();
    for _ in 0..steps {
        y = rk4_step(&l, &y, h);
        let tr = y.trace().re;
        worst_drift = worst_drift.max((tr - T::one()).abs());
        y = y.scale(T::one() / tr);
    }
    log::debug!("lindblad integrate: {steps} steps, max trace drift {:e}", to_f64(worst_drift));
    Ok(DensityMatrix::new_unchecked(y.hermitian_part()))
}

/// Per-time maximum elementwise deviation between the integrator and the channel.
#[derive(Clone, Debug, Serialize)]
pub struct DeviationReport {
    pub times: Vec<f64>,
    pub max_deviation: Vec<f64>,
}

impl DeviationReport {
    pub fn worst(&self) -> f64 {
        self.max_deviation.iter().copied().fold(0.0, f64::max)
    }
}

/// Integrate the rotating-frame master equation and compare against [`evolve`].
pub fn compare_to_kraus<T: Real>(
    rho0: &DensityMatrix<T>,
    bath: &BathSpec<T>,
    t_grid: &[T],
    ctl: &StepControl<T>,
) -> Result<DeviationReport> {
    let spec = LindbladSpec::rotating(*bath);
    let mut times = Vec::with_capacity(t_grid.len());
    let mut max_deviation = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let a = integrate(rho0, &spec, t, ctl)?;
        let b = evolve(rho0, bath, t)?;
        times.push(to_f64(t));
        max_deviation.push(to_f64(a.matrix().max_abs_diff(b.matrix())));
    }
    Ok(DeviationReport { times, max_deviation })
}
