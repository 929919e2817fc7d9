use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use super::eigen::{hermitian_eigenvalues, is_psd_within};
use super::matrix::{tensor_all, ComplexSquareMatrix};
use crate::error::{Error, Result};
use crate::scalar::{tol, to_f64, Real};
use crate::tolerance;

/// Number of qubits for a matrix dimension, if it is a power of two.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::NotPowerOfTwo(dim))
    }
}

/// Unit-trace, Hermitian, positive-semidefinite state of `M` qubits.
///
/// Qubit 0 is the most significant bit of a basis index, and within each
/// qubit index 0 is the excited state `|+>` and index 1 the ground state `|->`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    qubits: usize,
    matrix: ComplexSquareMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validating constructor.
    pub fn new(matrix: ComplexSquareMatrix<T>) -> Result<Self> {
        let qubits = qubits_for_dim(matrix.dim())?;
        if qubits == 0 {
            return Err(Error::NotPowerOfTwo(1));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = matrix.hermiticity_error();
        if dev > tol::<T>(tolerance::HERMITIAN) {
            return Err(Error::NotHermitian { deviation: to_f64(dev) });
        }
        let tr = matrix.trace().re;
        if (tr - T::one()).abs() > tol::<T>(tolerance::TRACE) {
            return Err(Error::BadTrace { trace: to_f64(tr) });
        }
        if !is_psd_within(&matrix, tol::<T>(tolerance::PSD)) {
            return Err(Error::NotPositive { tolerance: tolerance::PSD });
        }
        Ok(Self { qubits, matrix })
    }

    /// Skip validation. The caller guarantees the state invariants.
    pub fn new_unchecked(matrix: ComplexSquareMatrix<T>) -> Self {
        let qubits = qubits_for_dim(matrix.dim()).expect("power-of-two dimension");
        Self { qubits, matrix }
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        Self::new(ComplexSquareMatrix::diagonal(diag))
    }

    pub fn from_pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let v: Vec<_> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexSquareMatrix::projector(&v))
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexSquareMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexSquareMatrix<T> {
        self.matrix
    }

    pub fn purity(&self) -> T {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn populations(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Eigenvalues sorted decreasing.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// tr(rho sigma), real for Hermitian arguments.
    pub fn overlap(&self, other: &Self) -> T {
        self.matrix.trace_product(&other.matrix).re
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::new_unchecked(self.matrix.kron(&other.matrix))
    }

    /// Partial transpose of one qubit.
    pub fn partial_transpose(&self, subsystem: usize) -> Result<ComplexSquareMatrix<T>> {
        partial_transpose(self, subsystem)
    }
}

fn check_index(index: usize, qubits: usize) -> Result<()> {
    if index >= qubits {
        Err(Error::IndexOutOfRange { index, qubits })
    } else {
        Ok(())
    }
}

/// Bit mask of qubit `index` inside a basis label of `qubits` qubits.
#[inline]
pub(crate) fn qubit_mask(index: usize, qubits: usize) -> usize {
    1 << (qubits - 1 - index)
}

/// Transpose the indices of one qubit only.
pub fn partial_transpose<T: Real>(rho: &DensityMatrix<T>, subsystem: usize) -> Result<ComplexSquareMatrix<T>> {
    partial_transpose_subset(rho.matrix(), &[subsystem])
}

/// Transpose the indices of every listed qubit.
pub fn partial_transpose_subset<T: Real>(m: &ComplexSquareMatrix<T>, subset: &[usize]) -> Result<ComplexSquareMatrix<T>> {
    let qubits = qubits_for_dim(m.dim())?;
    let mut mask = 0usize;
    for &q in subset {
        check_index(q, qubits)?;
        mask |= qubit_mask(q, qubits);
    }
    Ok(ComplexSquareMatrix::from_fn(m.dim(), |i, j| {
        // swap the masked bits of the row and column labels
        let diff = (i ^ j) & mask;
        m[(i ^ diff, j ^ diff)]
    }))
}

/// Apply a single-qubit superoperator to every 2×2 block of qubit `index`.
///
/// `superop[2a+b][2c+d]` maps block entry `(c, d)` into `(a, b)`. Cost is
/// `O(4^M)` per call rather than the `O(8^M)` of full matrix products.
pub fn apply_local_superoperator<T: Real>(
    m: &ComplexSquareMatrix<T>,
    index: usize,
    superop: &[[Complex<T>; 4]; 4],
) -> Result<ComplexSquareMatrix<T>> {
    let qubits = qubits_for_dim(m.dim())?;
    check_index(index, qubits)?;
    let bit = qubit_mask(index, qubits);
    let n = m.dim();
    let nonzero: Vec<(usize, usize, Complex<T>)> = (0..4)
        .flat_map(|r| (0..4).map(move |c| (r, c)))
        .filter(|&(r, c)| !superop[r][c].is_zero())
        .map(|(r, c)| (r, c, superop[r][c]))
        .collect();

    let src = m.as_slice();
    let mut out = ComplexSquareMatrix::zeros(n);
    let dst = out.as_mut_slice();
    for i in (0..n).filter(|i| i & bit == 0) {
        let rows = [i, i | bit];
        for j in (0..n).filter(|j| j & bit == 0) {
            let cols = [j, j | bit];
            let x = [
                src[rows[0] * n + cols[0]],
                src[rows[0] * n + cols[1]],
                src[rows[1] * n + cols[0]],
                src[rows[1] * n + cols[1]],
            ];
            let mut y = [Complex::<T>::zero(); 4];
            for &(r, c, s) in &nonzero {
                y[r] = y[r] + s * x[c];
            }
            dst[rows[0] * n + cols[0]] = y[0];
            dst[rows[0] * n + cols[1]] = y[1];
            dst[rows[1] * n + cols[0]] = y[2];
            dst[rows[1] * n + cols[1]] = y[3];
        }
    }
    Ok(out)
}

/// Tensor product of single-qubit rank-1 projectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductProjector<T: Real> {
    factors: Vec<ComplexSquareMatrix<T>>,
}

impl<T: Real> ProductProjector<T> {
    pub fn new(factors: Vec<ComplexSquareMatrix<T>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("product projector needs at least one factor".into()));
        }
        let eps = tol::<T>(tolerance::HERMITIAN);
        for p in &factors {
            if p.dim() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: p.dim() });
            }
            let idempotent = p.matmul(p).max_abs_diff(p) <= eps;
            let hermitian = p.hermiticity_error() <= eps;
            let rank_one = (p.trace().re - T::one()).abs() <= eps;
            if !(idempotent && hermitian && rank_one) {
                return Err(Error::InvalidParameter("factor is not a rank-1 projector".into()));
            }
        }
        Ok(Self { factors })
    }

    /// Projector onto the product of normalised single-qubit vectors.
    pub fn from_vectors(vectors: &[[Complex<T>; 2]]) -> Result<Self> {
        let factors = vectors
            .iter()
            .map(|v| {
                let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                let u = [v[0] / n, v[1] / n];
                ComplexSquareMatrix::projector(&u)
            })
            .collect();
        Self::new(factors)
    }

    pub fn factors(&self) -> &[ComplexSquareMatrix<T>] {
        &self.factors
    }

    pub fn qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn to_matrix(&self) -> ComplexSquareMatrix<T> {
        tensor_all(&self.factors)
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix::new_unchecked(self.to_matrix())
    }
}

/// Compact serialisable view of a diagonal state.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalView {
    pub qubits: usize,
    pub diagonal: Vec<f64>,
}

impl<T: Real> From<&DensityMatrix<T>> for DiagonalView {
    fn from(rho: &DensityMatrix<T>) -> Self {
        Self { qubits: rho.qubits(), diagonal: rho.populations().into_iter().map(to_f64).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    type D = DensityMatrix<f64>;
    type M = ComplexSquareMatrix<f64>;

    fn singlet() -> D {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        D::from_pure(&[cplx(0.0, 0.0), cplx(h, 0.0), cplx(-h, 0.0), cplx(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn validation_rejects_bad_states() {
        assert!(matches!(D::new(M::diagonal(&[0.5, 0.6])), Err(Error::BadTrace { .. })));
        assert!(matches!(D::new(M::diagonal(&[1.2, -0.2])), Err(Error::NotPositive { .. })));
        assert!(matches!(D::new(M::diagonal(&[0.2, 0.3, 0.5])), Err(Error::NotPowerOfTwo(3))));
        let skew = M::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(matches!(D::new(skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn diagonal_state_is_pt_invariant() {
        let rho = D::from_diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(partial_transpose(&rho, 0).unwrap(), *rho.matrix());
        assert_eq!(partial_transpose(&rho, 1).unwrap(), *rho.matrix());
    }

    #[test]
    fn singlet_pt_min_eigenvalue() {
        let pt = partial_transpose(&singlet(), 1).unwrap();
        let v = hermitian_eigenvalues(&pt).unwrap();
        assert!((v[3] + 0.5).abs() < 1e-14);
        assert!((pt.trace().re - 1.0).abs() < 1e-15);
        assert_eq!(pt.hermiticity_error(), 0.0);
    }

    #[test]
    fn product_state_pt_is_local_transpose() {
        let a = M::from_row_major(2, vec![cplx(0.7, 0.0), cplx(0.1, 0.2), cplx(0.1, -0.2), cplx(0.3, 0.0)]).unwrap();
        let b = M::from_row_major(2, vec![cplx(0.4, 0.0), cplx(0.0, 0.3), cplx(0.0, -0.3), cplx(0.6, 0.0)]).unwrap();
        let rho = D::new(a.kron(&b)).unwrap();
        let pt = partial_transpose(&rho, 1).unwrap();
        assert_eq!(pt, a.kron(&b.transpose()));
        assert!(hermitian_eigenvalues(&pt).unwrap()[3] >= -1e-15);
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(partial_transpose(&singlet(), 2), Err(Error::IndexOutOfRange { index: 2, qubits: 2 }));
    }

    #[test]
    fn identity_superoperator_is_noop() {
        let one = cplx(1.0, 0.0);
        let z = cplx(0.0, 0.0);
        let id = [[one, z, z, z], [z, one, z, z], [z, z, one, z], [z, z, z, one]];
        let rho = singlet();
        for q in 0..2 {
            assert_eq!(apply_local_superoperator(rho.matrix(), q, &id).unwrap(), *rho.matrix());
        }
    }

    #[test]
    fn product_projector_validation() {
        let p = ProductProjector::<f64>::from_vectors(&[[cplx(1.0, 0.0), cplx(1.0, 0.0)], [cplx(0.0, 0.0), cplx(1.0, 0.0)]])
            .unwrap();
        let m = p.to_matrix();
        assert!(m.matmul(&m).max_abs_diff(&m) < 1e-15);
        assert!(ProductProjector::new(vec![M::diagonal(&[0.5, 0.5])]).is_err());
    }
}
