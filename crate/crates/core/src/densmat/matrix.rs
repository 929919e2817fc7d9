use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Dense square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSquareMatrix<T: Real> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexSquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self { dim, data: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Build from row-major entries; fails on a non-square length or non-finite entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
            }
            data.extend(r.iter().map(|&x| real(T::from_f64(x).unwrap_or_else(T::nan))));
        }
        Self::from_row_major(dim, data)
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &p) in entries.iter().enumerate() {
            m[(i, i)] = real(p);
        }
        m
    }

    /// Outer product |u><v|.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn projector(psi: &[Complex<T>]) -> Self {
        Self::outer(psi, psi)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn diagonal_entries(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = Complex::zero();
        for i in 0..n {
            for k in 0..n {
                acc = acc + self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn frobenius_distance(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<T>().sqrt()
    }

    /// Max elementwise |A - A^H|.
    pub fn hermiticity_error(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Replace the matrix by (A + A^H)/2.
    pub fn hermitian_part(&self) -> Self {
        let half = T::one() / (T::one() + T::one());
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex::zero(); n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// A A^H, computed on the upper triangle and mirrored.
    pub fn gram(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let ri = self.row(i);
            for j in i..n {
                let rj = self.row(j);
                let s = ri.iter().zip(rj).fold(Complex::zero(), |acc, (a, b)| acc + a * b.conj());
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
        }
        for i in 0..n {
            out[(i, i)].im = T::zero();
        }
        out
    }

    /// A x for a column vector x.
    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).fold(Complex::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Kronecker product; the left factor indexes the slower (more significant) position.
    pub fn kron(&self, other: &Self) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for i in 0..na {
            for j in 0..na {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..nb {
                    for l in 0..nb {
                        out[(i * nb + k, j * nb + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexSquareMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexSquareMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Add for &ComplexSquareMatrix<T> {
    type Output = ComplexSquareMatrix<T>;
    fn add(self, rhs: Self) -> ComplexSquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        ComplexSquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexSquareMatrix<T> {
    type Output = ComplexSquareMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexSquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        ComplexSquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &ComplexSquareMatrix<T> {
    type Output = ComplexSquareMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexSquareMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Neg for &ComplexSquareMatrix<T> {
    type Output = ComplexSquareMatrix<T>;
    fn neg(self) -> ComplexSquareMatrix<T> {
        ComplexSquareMatrix { dim: self.dim, data: self.data.iter().map(|z| -z).collect() }
    }
}

/// Kronecker product a ⊗ b: `(a⊗b)[i·db+k, j·db+l] = a[i,j]·b[k,l]`.
pub fn tensor_product<T: Real>(a: &ComplexSquareMatrix<T>, b: &ComplexSquareMatrix<T>) -> ComplexSquareMatrix<T> {
    a.kron(b)
}

/// Tensor product of a list of factors, first factor most significant.
pub fn tensor_all<T: Real>(factors: &[ComplexSquareMatrix<T>]) -> ComplexSquareMatrix<T> {
    let mut it = factors.iter();
    let first = it.next().expect("at least one factor").clone();
    it.fold(first, |acc, f| acc.kron(f))
}

/// Pauli matrices in the (excited, ground) basis.
pub mod pauli {
    use super::ComplexSquareMatrix;
    use crate::scalar::{cplx, Real};
    use num_traits::{One, Zero};

    pub fn x<T: Real>() -> ComplexSquareMatrix<T> {
        let (o, z) = (cplx(T::one(), T::zero()), num_complex::Complex::zero());
        ComplexSquareMatrix::from_row_major(2, vec![z, o, o, z]).unwrap()
    }

    pub fn y<T: Real>() -> ComplexSquareMatrix<T> {
        let i = cplx(T::zero(), T::one());
        ComplexSquareMatrix::from_row_major(2, vec![num_complex::Complex::zero(), -i, i, num_complex::Complex::zero()])
            .unwrap()
    }

    /// sigma_z = |+><+| - |-><-|.
    pub fn z<T: Real>() -> ComplexSquareMatrix<T> {
        ComplexSquareMatrix::diagonal(&[T::one(), -T::one()])
    }

    /// sigma_- = |-><+| (lowers excited to ground).
    pub fn lowering<T: Real>() -> ComplexSquareMatrix<T> {
        let mut m = ComplexSquareMatrix::zeros(2);
        m[(1, 0)] = num_complex::Complex::one();
        m
    }

    /// sigma_+ = |+><-|.
    pub fn raising<T: Real>() -> ComplexSquareMatrix<T> {
        let mut m = ComplexSquareMatrix::zeros(2);
        m[(0, 1)] = num_complex::Complex::one();
        m
    }
}
