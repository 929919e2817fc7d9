//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.
//!
//! Rotations are applied in a fixed order, so results are bit-for-bit
//! reproducible for a given input. Entries that are exactly zero are never
//! touched, which keeps exact zeros in structured (e.g. X-shaped) states.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexSquareMatrix;
use crate::error::{Error, Result};
use crate::scalar::{tol, Real};
use crate::tolerance;

/// Eigenvalues sorted decreasing, with eigenvectors stored as columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: ComplexSquareMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        let n = self.vectors.dim();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }

    /// Rebuild V f(D) V^H.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> ComplexSquareMatrix<T> {
        let n = self.vectors.dim();
        let weights: Vec<T> = self.values.iter().map(|&x| f(x)).collect();
        ComplexSquareMatrix::from_fn(n, |i, j| {
            let mut s = Complex::zero();
            for (k, &w) in weights.iter().enumerate() {
                if w != T::zero() {
                    s = s + self.vectors[(i, k)] * self.vectors[(j, k)].conj() * w;
                }
            }
            s
        })
    }
}

const MAX_SWEEPS: usize = 100;

fn check_hermitian<T: Real>(a: &ComplexSquareMatrix<T>) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let dev = a.hermiticity_error();
    let scale = T::one().max(a.max_abs());
    if dev > tol::<T>(tolerance::EIGEN_HERMITIAN) * scale {
        return Err(Error::NotHermitian { deviation: crate::scalar::to_f64(dev) });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, sorted decreasing.
pub fn hermitian_eigenvalues<T: Real>(a: &ComplexSquareMatrix<T>) -> Result<Vec<T>> {
    check_hermitian(a)?;
    Ok(jacobi(a, false).values)
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen<T: Real>(a: &ComplexSquareMatrix<T>) -> Result<HermitianEigen<T>> {
    check_hermitian(a)?;
    Ok(jacobi(a, true))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Real>(a: &ComplexSquareMatrix<T>) -> Result<T> {
    let v = hermitian_eigenvalues(a)?;
    Ok(*v.last().expect("non-empty spectrum"))
}

fn off_diagonal_norm_sqr<T: Real>(a: &[Complex<T>], n: usize) -> T {
    let mut s = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            s = s + a[i * n + j].norm_sqr();
        }
    }
    s
}

fn jacobi<T: Real>(input: &ComplexSquareMatrix<T>, want_vectors: bool) -> HermitianEigen<T> {
    let n = input.dim();
    let herm = input.hermitian_part();
    let mut a: Vec<Complex<T>> = herm.as_slice().to_vec();
    for i in 0..n {
        a[i * n + i].im = T::zero();
    }
    let mut v = if want_vectors { Some(ComplexSquareMatrix::<T>::identity(n)) } else { None };

    let total: T = a.iter().map(|z| z.norm_sqr()).sum();
    let threshold = (T::epsilon() * T::epsilon()) * total;
    let two = T::one() + T::one();

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm_sqr(&a, n);
        if off <= threshold || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Skip rotations that cannot change the diagonal at working precision.
                if r <= T::epsilon() * T::epsilon() * (app.abs() + aqq.abs()) {
                    a[p * n + q] = Complex::zero();
                    a[q * n + p] = Complex::zero();
                    continue;
                }
                let phase = apq / r; // e^{i phi}
                let tau = (aqq - app) / (two * r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
                let jpp = Complex::new(c, T::zero());
                let jpq = Complex::new(s, T::zero());
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;

                // A <- A J (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * jpp + akq * jqp;
                    a[k * n + q] = akp * jpq + akq * jqq;
                }
                // A <- J^H A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[p * n + q] = Complex::zero();
                a[q * n + p] = Complex::zero();
                a[p * n + p].im = T::zero();
                a[q * n + q].im = T::zero();

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * jpp + vkq * jqp;
                        v[(k, q)] = vkp * jpq + vkq * jqq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.partial_cmp(&a[i * n + i].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = match v {
        Some(v) => ComplexSquareMatrix::from_fn(n, |i, k| v[(i, order[k])]),
        None => ComplexSquareMatrix::zeros(n),
    };
    HermitianEigen { values, vectors }
}

/// Singular values of a square complex matrix, sorted decreasing.
///
/// One-sided (Hestenes) Jacobi: columns are rotated until mutually
/// orthogonal and the singular values are read off as column norms. Unlike
/// square roots of the eigenvalues of A^H A, small singular values keep an
/// absolute error of order eps·‖A‖ instead of sqrt(eps).
pub fn singular_values<T: Real>(input: &ComplexSquareMatrix<T>) -> Result<Vec<T>> {
    if !input.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = input.dim();
    let mut a = input.clone();
    let two = T::one() + T::one();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = Complex::<T>::zero();
                for k in 0..n {
                    alpha = alpha + a[(k, p)].norm_sqr();
                    beta = beta + a[(k, q)].norm_sqr();
                    gamma = gamma + a[(k, p)].conj() * a[(k, q)];
                }
                let r = gamma.norm();
                if r == T::zero() || r <= T::epsilon() * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / r;
                let tau = (beta - alpha) / (two * r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let jpp = Complex::new(c, T::zero());
                let jpq = Complex::new(s, T::zero());
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut values: Vec<T> = (0..n).map(|j| (0..n).map(|k| a[(k, j)].norm_sqr()).sum::<T>().sqrt()).collect();
    values.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(values)
}

/// Positive-semidefiniteness test via Cholesky factorisation of `A + shift·I`.
///
/// Succeeds exactly when every eigenvalue of `A` is at least `-shift`
/// (up to rounding), at `O(n³/3)` cost; used where a full eigensolve of a
/// large state would be wasteful.
pub fn is_psd_within<T: Real>(a: &ComplexSquareMatrix<T>, shift: T) -> bool {
    let n = a.dim();
    let mut l = vec![Complex::<T>::zero(); n * n];
    for j in 0..n {
        let mut d = a[(j, j)].re + shift;
        for k in 0..j {
            d = d - l[j * n + k].norm_sqr();
        }
        if !(d > T::zero()) {
            return false;
        }
        let djj = d.sqrt();
        l[j * n + j] = Complex::new(djj, T::zero());
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / djj;
        }
    }
    true
}
