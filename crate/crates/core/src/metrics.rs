//! Two-qubit entanglement: Wootters Λ and concurrence, partial-transpose
//! separability tests, and entanglement witnesses.

use serde::Serialize;

use crate::densmat::{
    hermitian_eigen, min_eigenvalue, partial_transpose_subset, pauli, random_product_projector,
    seeded_rng, singular_values, tensor_product, ComplexSquareMatrix, DensityMatrix, ProductProjector,
};
use crate::error::{Error, Result};
use crate::scalar::{tol, to_f64, Real};
use crate::tolerance;

fn require_two_qubits<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.qubits() == 2 {
        Ok(())
    } else {
        Err(Error::WrongDimension { qubits: rho.qubits() })
    }
}

/// Spin-flipped state (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
pub fn spin_flip<T: Real>(rho: &DensityMatrix<T>) -> Result<ComplexSquareMatrix<T>> {
    require_two_qubits(rho)?;
    let yy = tensor_product(&pauli::y::<T>(), &pauli::y());
    Ok(yy.matmul(&rho.matrix().conj()).matmul(&yy))
}

/// Eigenvalues of ζ = ρ ρ̃, sorted decreasing.
///
/// With ρ = B B^H and B = V √D from the eigendecomposition of ρ, the
/// eigenvalues of ζ are the squared singular values of B^T (σ_y⊗σ_y) B. That
/// route keeps the square roots entering Λ accurate to about eps, where the
/// spectrum of ζ itself would only give sqrt(eps). Eigenvalues of ρ in
/// (−1e-10, 0) are clamped to zero; anything more negative is a
/// numerical-integrity failure.
pub fn spin_flip_spectrum<T: Real>(rho: &DensityMatrix<T>) -> Result<[T; 4]> {
    let roots = spin_flip_roots(rho)?;
    Ok(roots.map(|r| r * r))
}

fn spin_flip_roots<T: Real>(rho: &DensityMatrix<T>) -> Result<[T; 4]> {
    require_two_qubits(rho)?;
    let eig = hermitian_eigen(rho.matrix())?;
    let dust = tol::<T>(tolerance::DUST);
    if let Some(&v) = eig.values.iter().find(|&&v| v < -dust) {
        return Err(Error::NumericalIntegrity(format!("density-matrix eigenvalue {v} is negative")));
    }
    let roots: Vec<T> = eig.values.iter().map(|&x| x.max(T::zero()).sqrt()).collect();
    let b = ComplexSquareMatrix::from_fn(4, |i, k| eig.vectors[(i, k)] * roots[k]);
    let yy = tensor_product(&pauli::y::<T>(), &pauli::y());
    let c = b.transpose().matmul(&yy).matmul(&b);
    let sv = singular_values(&c)?;
    Ok([sv[0], sv[1], sv[2], sv[3]])
}

/// Λ(ρ) = √λ₁ − √λ₂ − √λ₃ − √λ₄, with rounding-level values snapped to zero.
pub fn lambda_value<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let l = spin_flip_roots(rho)?;
    let lambda = l[0] - l[1] - l[2] - l[3];
    Ok(if lambda.abs() <= tol::<T>(tolerance::LAMBDA_ROUNDOFF) { T::zero() } else { lambda })
}

pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(lambda_value(rho)?.max(T::zero()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Separability {
    Entangled,
    BoundarySeparable,
    SuperSeparable,
}

impl Separability {
    /// Reporting convention: |Λ| ≤ 1e-12 counts as the separable boundary.
    pub fn classify<T: Real>(lambda: T) -> Self {
        let eps = tol::<T>(tolerance::BOUNDARY);
        if lambda.abs() <= eps {
            Separability::BoundarySeparable
        } else if lambda > T::zero() {
            Separability::Entangled
        } else {
            Separability::SuperSeparable
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Separability::Entangled => "entangled",
            Separability::BoundarySeparable => "boundary-separable",
            Separability::SuperSeparable => "super-separable",
        }
    }
}

impl std::fmt::Display for Separability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambdaReport<T: Real> {
    pub lambda: T,
    pub concurrence: T,
    pub classification: Separability,
}

impl<T: Real> LambdaReport<T> {
    pub fn from_lambda(lambda: T) -> Self {
        let classification = Separability::classify(lambda);
        let concurrence = if classification == Separability::Entangled { lambda } else { T::zero() };
        Self { lambda, concurrence, classification }
    }
}

pub fn lambda_report<T: Real>(rho: &DensityMatrix<T>) -> Result<LambdaReport<T>> {
    Ok(LambdaReport::from_lambda(lambda_value(rho)?))
}

fn validate_bipartition(qubits: usize, subset: &[usize]) -> Result<()> {
    if subset.is_empty() || subset.len() >= qubits {
        return Err(Error::InvalidBipartition(format!("{subset:?} is not a proper subset of {qubits} qubits")));
    }
    let mut seen = vec![false; qubits];
    for &q in subset {
        if q >= qubits {
            return Err(Error::InvalidBipartition(format!("qubit {q} out of range")));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::InvalidBipartition(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

/// Smallest eigenvalue of the partial transpose over `subset`.
pub fn min_pt_eigenvalue<T: Real>(rho: &DensityMatrix<T>, subset: &[usize]) -> Result<T> {
    validate_bipartition(rho.qubits(), subset)?;
    min_eigenvalue(&partial_transpose_subset(rho.matrix(), subset)?)
}

/// One representative subset per bipartition: the non-empty subsets of qubits 1..M.
pub fn bipartitions(qubits: usize) -> Vec<Vec<usize>> {
    if qubits < 2 {
        return Vec::new();
    }
    (1usize..(1 << (qubits - 1)))
        .map(|bits| (1..qubits).filter(|q| bits & (1 << (q - 1)) != 0).collect())
        .collect()
}

/// Most negative partial-transpose eigenvalue across all bipartitions.
pub fn min_pt_over_cuts<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let mut worst = T::infinity();
    for cut in bipartitions(rho.qubits()) {
        worst = worst.min(min_eigenvalue(&partial_transpose_subset(rho.matrix(), &cut)?)?);
    }
    Ok(worst)
}

/// Magnitude of the most negative partial-transpose eigenvalue (zero when PPT).
pub fn negativity<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok((-min_pt_over_cuts(rho)?).max(T::zero()))
}

/// True when some bipartition has a partial-transpose eigenvalue below −1e-10.
pub fn is_npt<T: Real>(rho: &DensityMatrix<T>) -> Result<bool> {
    Ok(min_pt_over_cuts(rho)? < -tol::<T>(tolerance::NPT))
}

/// Hermitian operator detecting a specific entangled state.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<T: Real> {
    pub matrix: ComplexSquareMatrix<T>,
    pub target: DensityMatrix<T>,
}

impl<T: Real> Witness<T> {
    /// tr(W σ).
    pub fn expectation(&self, sigma: &DensityMatrix<T>) -> T {
        self.matrix.trace_product(sigma.matrix()).re
    }

    pub fn target_expectation(&self) -> T {
        self.expectation(&self.target)
    }
}

/// W = (|φ⟩⟨φ|)^{T_B} for the most negative eigenvector φ of ρ^{T_B}.
///
/// tr(Wρ) equals that eigenvalue, and tr(Wσ) = ⟨φ|σ^{T_B}|φ⟩ ≥ 0 for every
/// separable σ.
pub fn witness_from_state<T: Real>(rho: &DensityMatrix<T>) -> Result<Witness<T>> {
    require_two_qubits(rho)?;
    let pt = partial_transpose_subset(rho.matrix(), &[1])?;
    let eig = hermitian_eigen(&pt)?;
    let lowest = *eig.values.last().expect("4 eigenvalues");
    if lowest >= -tol::<T>(tolerance::NPT) {
        return Err(Error::NotEntangled { min_eigenvalue: to_f64(lowest) });
    }
    let phi = eig.vector(3);
    let matrix = partial_transpose_subset(&ComplexSquareMatrix::projector(&phi), &[1])?;
    Ok(Witness { matrix, target: rho.clone() })
}

/// Successful product-projector probe of a traceless witness.
#[derive(Clone, Debug)]
pub struct ProbeOutcome<T: Real> {
    pub projector: ProductProjector<T>,
    /// tr(W·P⊗Q)
    pub trace: T,
    /// tr(W·(I − P⊗Q))
    pub complement_trace: T,
    pub trials_used: usize,
}

/// Minimum |tr(W·P⊗Q)| accepted as non-zero by [`proof_probe`].
pub const PROBE_THRESHOLD: f64 = 1e-6;

/// Random search for a product projector with tr(W·P⊗Q) ≠ 0.
///
/// `w` must be Hermitian, non-zero, with every diagonal entry zero. Because
/// tr(W) = 0, the complement I − P⊗Q then carries the opposite trace, so W
/// cannot be non-negative on both.
pub fn proof_probe<T: Real>(w: &ComplexSquareMatrix<T>, trials: usize, seed: u64) -> Result<ProbeOutcome<T>> {
    let qubits = crate::densmat::qubits_for_dim(w.dim())?;
    let eps = tol::<T>(tolerance::HERMITIAN);
    if w.hermiticity_error() > eps {
        return Err(Error::InvalidWitness("operator is not Hermitian".into()));
    }
    if w.diagonal_entries().iter().any(|d| d.norm() > eps) {
        return Err(Error::InvalidWitness("diagonal entries must vanish".into()));
    }
    if w.frobenius_norm() == T::zero() {
        return Err(Error::InvalidWitness("operator is zero".into()));
    }
    let threshold = crate::scalar::lit::<T>(PROBE_THRESHOLD);
    let identity = ComplexSquareMatrix::identity(w.dim());
    let mut rng = seeded_rng(seed);
    let mut best = T::zero();
    for trial in 1..=trials {
        let p = random_product_projector::<T, _>(qubits, &mut rng);
        let pm = p.to_matrix();
        let trace = w.trace_product(&pm).re;
        if trace.abs() > threshold {
            let complement_trace = w.trace_product(&(&identity - &pm)).re;
            return Ok(ProbeOutcome { projector: p, trace, complement_trace, trials_used: trial });
        }
        best = best.max(trace.abs());
    }
    Err(Error::SearchExhausted { trials, best: to_f64(best) })
}
