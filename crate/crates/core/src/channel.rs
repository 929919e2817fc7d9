//! Finite-temperature single-qubit relaxation channel and its M-qubit product.
//!
//! Each qubit relaxes under the same bath, so the M-qubit channel is the
//! M-fold tensor power of one four-operator channel (generalized amplitude
//! damping). It is applied one qubit at a time.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::densmat::{apply_local_superoperator, tensor_all, ComplexSquareMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::scalar::{lit, real, to_f64, Real};

/// Thermal reservoir shared by all qubits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BathSpec<T: Real> {
    /// Spontaneous decay rate Γ.
    pub gamma_rate: T,
    /// Mean thermal occupation n̄.
    pub nbar: T,
}

impl<T: Real> BathSpec<T> {
    pub fn new(gamma_rate: T, nbar: T) -> Result<Self> {
        if !(gamma_rate > T::zero()) || !gamma_rate.is_finite() {
            return Err(Error::InvalidParameter(format!("decay rate must be positive, got {gamma_rate}")));
        }
        if !(nbar >= T::zero()) || !nbar.is_finite() {
            return Err(Error::InvalidParameter(format!("thermal occupation must be non-negative, got {nbar}")));
        }
        Ok(Self { gamma_rate, nbar })
    }

    /// Population relaxation rate Γ(2n̄+1).
    pub fn total_rate(&self) -> T {
        self.gamma_rate * (lit::<T>(2.0) * self.nbar + T::one())
    }

    /// Time expressed in units of the population relaxation time.
    pub fn scaled_time(&self, t: T) -> T {
        self.total_rate() * t
    }
}

/// Mean thermal occupation `1/(e^{ω/kT} − 1)`, zero at `kT = 0`.
pub fn nbar_from_temperature<T: Real>(omega: T, kt: T) -> Result<T> {
    if !(omega > T::zero()) {
        return Err(Error::InvalidFrequency(to_f64(omega)));
    }
    if !(kt >= T::zero()) {
        return Err(Error::InvalidParameter(format!("temperature must be non-negative, got {kt}")));
    }
    if kt == T::zero() {
        return Ok(T::zero());
    }
    Ok(T::one() / (omega / kt).exp_m1())
}

/// Time-dependent amplitudes γ(t) and ω(t) with γ² + ω² = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelCoefficients<T: Real> {
    pub gamma_t: T,
    pub omega_t: T,
}

impl<T: Real> ChannelCoefficients<T> {
    /// Coefficients for a given coherence amplitude γ ∈ [0, 1].
    pub fn from_gamma(gamma_t: T) -> Result<Self> {
        if !(gamma_t >= T::zero() && gamma_t <= T::one()) {
            return Err(Error::InvalidParameter(format!("gamma(t) must lie in [0, 1], got {gamma_t}")));
        }
        Ok(Self { gamma_t, omega_t: (T::one() - gamma_t * gamma_t).max(T::zero()).sqrt() })
    }

    /// Coefficients for a given ω ∈ [0, 1].
    pub fn from_omega(omega_t: T) -> Result<Self> {
        if !(omega_t >= T::zero() && omega_t <= T::one()) {
            return Err(Error::InvalidParameter(format!("omega(t) must lie in [0, 1], got {omega_t}")));
        }
        Ok(Self { gamma_t: (T::one() - omega_t * omega_t).max(T::zero()).sqrt(), omega_t })
    }

    pub fn identity() -> Self {
        Self { gamma_t: T::one(), omega_t: T::zero() }
    }

    pub fn gamma_sq(&self) -> T {
        self.gamma_t * self.gamma_t
    }
}

/// γ(t) = exp[−½Γ(2n̄+1)t], ω(t) = √(1 − γ²).
pub fn coefficients<T: Real>(bath: &BathSpec<T>, t: T) -> Result<ChannelCoefficients<T>> {
    if !(t >= T::zero()) {
        return Err(Error::NegativeTime(to_f64(t)));
    }
    let x = bath.total_rate() * t;
    let gamma_t = (-x / lit(2.0)).exp();
    // 1 - e^{-x} without cancellation at small x
    let omega_t = (-(-x).exp_m1()).max(T::zero()).sqrt();
    Ok(ChannelCoefficients { gamma_t, omega_t })
}

/// Time at which ω(t) reaches the given value (inverse of [`coefficients`]).
pub fn time_for_omega<T: Real>(bath: &BathSpec<T>, omega_t: T) -> T {
    // γ² = 1 − ω², t = −ln(γ²)/Γ(2n̄+1)
    -(-(omega_t * omega_t)).ln_1p() / bath.total_rate()
}

/// The four single-qubit Kraus operators, basis order (excited, ground).
#[derive(Clone, Debug, PartialEq)]
pub struct KrausQuartet<T: Real> {
    pub k1: ComplexSquareMatrix<T>,
    pub k2: ComplexSquareMatrix<T>,
    pub k3: ComplexSquareMatrix<T>,
    pub k4: ComplexSquareMatrix<T>,
}

impl<T: Real> KrausQuartet<T> {
    pub fn operators(&self) -> [&ComplexSquareMatrix<T>; 4] {
        [&self.k1, &self.k2, &self.k3, &self.k4]
    }

    /// Σ K†K, which must equal the identity.
    pub fn completeness(&self) -> ComplexSquareMatrix<T> {
        self.operators()
            .iter()
            .map(|k| k.adjoint().matmul(k))
            .fold(ComplexSquareMatrix::zeros(2), |acc, m| &acc + &m)
    }

    /// Superoperator Σ K ⊗ K̄ acting on a row-major 2×2 block.
    pub fn superoperator(&self) -> [[Complex<T>; 4]; 4] {
        let mut s = [[Complex::zero(); 4]; 4];
        for k in self.operators() {
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        for d in 0..2 {
                            s[2 * a + b][2 * c + d] = s[2 * a + b][2 * c + d] + k[(a, c)] * k[(b, d)].conj();
                        }
                    }
                }
            }
        }
        s
    }

    /// Single-qubit action ρ ↦ Σ K ρ K†.
    pub fn apply_single(&self, rho: &ComplexSquareMatrix<T>) -> ComplexSquareMatrix<T> {
        self.operators()
            .iter()
            .map(|k| k.matmul(rho).matmul(&k.adjoint()))
            .fold(ComplexSquareMatrix::zeros(2), |acc, m| &acc + &m)
    }
}

/// Build the quartet for occupation n̄ and amplitudes (γ, ω).
///
/// `K1 = a·diag(γ, 1)`, `K2 = a·ω|−⟩⟨+|`, `K3 = b·diag(1, γ)`, `K4 = b·ω|+⟩⟨−|`
/// with `a = √((n̄+1)/(2n̄+1))` and `b = √(n̄/(2n̄+1))`.
pub fn kraus_quartet<T: Real>(nbar: T, coeff: &ChannelCoefficients<T>) -> KrausQuartet<T> {
    let denom = lit::<T>(2.0) * nbar + T::one();
    let emit = ((nbar + T::one()) / denom).sqrt();
    let absorb = (nbar / denom).sqrt();
    let (g, w) = (coeff.gamma_t, coeff.omega_t);
    let zero = T::zero();
    let m = |a: T, b: T, c: T, d: T| {
        ComplexSquareMatrix::from_row_major(2, vec![real(a), real(b), real(c), real(d)]).expect("2x2")
    };
    KrausQuartet {
        k1: m(emit * g, zero, zero, emit),
        k2: m(zero, zero, emit * w, zero),
        k3: m(absorb, zero, zero, absorb * g),
        k4: m(zero, absorb * w, zero, zero),
    }
}

/// Apply the quartet to one qubit of an M-qubit state in `O(4^M)`.
pub fn apply_to_qubit<T: Real>(rho: &DensityMatrix<T>, qubit: usize, quartet: &KrausQuartet<T>) -> Result<DensityMatrix<T>> {
    let out = apply_local_superoperator(rho.matrix(), qubit, &quartet.superoperator())?;
    Ok(DensityMatrix::new_unchecked(out))
}

/// Apply the quartet to every qubit in turn.
pub fn apply_to_all<T: Real>(rho: &DensityMatrix<T>, quartet: &KrausQuartet<T>) -> DensityMatrix<T> {
    let s = quartet.superoperator();
    let mut m = rho.matrix().clone();
    for q in 0..rho.qubits() {
        m = apply_local_superoperator(&m, q, &s).expect("qubit index in range");
    }
    DensityMatrix::new_unchecked(m)
}

/// Reference implementation summing all 4^M Kraus strings explicitly.
///
/// Costs `O(4^M · 8^M)`; only meant for cross-checking [`apply_to_all`] on small systems.
pub fn apply_by_enumeration<T: Real>(rho: &DensityMatrix<T>, quartet: &KrausQuartet<T>) -> DensityMatrix<T> {
    let m = rho.qubits();
    let ops = quartet.operators();
    let strings = 4usize.pow(m as u32);
    let mut acc = ComplexSquareMatrix::zeros(rho.dim());
    for label in 0..strings {
        let factors: Vec<ComplexSquareMatrix<T>> =
            (0..m).map(|q| ops[(label >> (2 * (m - 1 - q))) & 3].clone()).collect();
        let k = tensor_all(&factors);
        let term = k.matmul(rho.matrix()).matmul(&k.adjoint());
        acc = &acc + &term;
    }
    DensityMatrix::new_unchecked(acc)
}

/// State at time `t` under the thermal channel on every qubit.
pub fn evolve<T: Real>(rho0: &DensityMatrix<T>, bath: &BathSpec<T>, t: T) -> Result<DensityMatrix<T>> {
    let coeff = coefficients(bath, t)?;
    if t == T::zero() {
        return Ok(rho0.clone());
    }
    Ok(apply_to_all(rho0, &kraus_quartet(bath.nbar, &coeff)))
}

/// Diagonal steady state: M-fold power of diag(n̄/(2n̄+1), (n̄+1)/(2n̄+1)).
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalState<T: Real> {
    pub qubits: usize,
    pub nbar: T,
    pub state: DensityMatrix<T>,
}

impl<T: Real> ThermalState<T> {
    pub fn diagonal(&self) -> Vec<T> {
        self.state.populations()
    }
}

/// Single-qubit excited and ground populations at equilibrium.
pub fn thermal_populations<T: Real>(nbar: T) -> (T, T) {
    let denom = lit::<T>(2.0) * nbar + T::one();
    (nbar / denom, (nbar + T::one()) / denom)
}

/// Two-qubit thermal probabilities (p1, p2, p3, p4) over |++>, |+->, |-+>, |-->.
pub fn two_qubit_thermal_probabilities<T: Real>(nbar: T) -> [T; 4] {
    let d = lit::<T>(2.0) * nbar + T::one();
    let d2 = d * d;
    let mixed = nbar * (nbar + T::one()) / d2;
    [nbar * nbar / d2, mixed, mixed, (nbar + T::one()) * (nbar + T::one()) / d2]
}

pub fn thermal_state<T: Real>(qubits: usize, nbar: T) -> Result<ThermalState<T>> {
    if qubits == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if !(nbar >= T::zero()) || !nbar.is_finite() {
        return Err(Error::InvalidParameter(format!("thermal occupation must be non-negative, got {nbar}")));
    }
    let diag = if qubits == 2 {
        two_qubit_thermal_probabilities(nbar).to_vec()
    } else {
        let (pe, pg) = thermal_populations(nbar);
        (0..1usize << qubits)
            .map(|label| {
                let excited = (qubits as u32) - label.count_ones();
                (0..qubits).fold(T::one(), |acc, q| if (q as u32) < excited { acc * pe } else { acc * pg })
            })
            .collect()
    };
    Ok(ThermalState { qubits, nbar, state: DensityMatrix::new_unchecked(ComplexSquareMatrix::diagonal(&diag)) })
}
