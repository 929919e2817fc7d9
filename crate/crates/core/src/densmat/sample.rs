//! Seeded random states.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::density::{DensityMatrix, ProductProjector};
use super::matrix::ComplexSquareMatrix;
use crate::scalar::{cplx, Real};

/// Generator used everywhere a seed is accepted.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-stream `stream` of a master seed, used so that parallel
/// and serial loops draw identical numbers per task.
pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    cplx(T::standard_normal(rng), T::standard_normal(rng))
}

/// Haar-random unit vector of dimension `dim`.
pub fn random_pure_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex<T>> {
    loop {
        let v: Vec<Complex<T>> = (0..dim).map(|_| complex_normal(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if n > T::epsilon() {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Hilbert–Schmidt random state: `G G^H / tr(G G^H)` for complex Gaussian `G`.
pub fn sample_random_density_with<T: Real, R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> DensityMatrix<T> {
    assert!(qubits >= 1, "need at least one qubit");
    let dim = 1usize << qubits;
    let g = ComplexSquareMatrix::from_fn(dim, |_, _| complex_normal::<T, _>(rng));
    let gg = g.gram();
    let tr = gg.trace().re;
    DensityMatrix::new_unchecked(gg.scale(T::one() / tr))
}

/// Deterministic Hilbert–Schmidt sample for a fixed seed.
pub fn sample_random_density<T: Real>(qubits: usize, seed: u64) -> DensityMatrix<T> {
    sample_random_density_with(qubits, &mut seeded_rng(seed))
}

/// Product of Haar-random single-qubit pure states, as a projector.
pub fn random_product_projector<T: Real, R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> ProductProjector<T> {
    let vs: Vec<[Complex<T>; 2]> = (0..qubits)
        .map(|_| {
            let v = random_pure_vector::<T, _>(2, rng);
            [v[0], v[1]]
        })
        .collect();
    ProductProjector::from_vectors(&vs).expect("normalised vectors give projectors")
}

pub fn sample_random_product_state_with<T: Real, R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> DensityMatrix<T> {
    assert!(qubits >= 1, "need at least one qubit");
    random_product_projector(qubits, rng).to_density()
}

/// Rank-1 separable test state for a fixed seed.
pub fn sample_random_product_state<T: Real>(qubits: usize, seed: u64) -> DensityMatrix<T> {
    sample_random_product_state_with(qubits, &mut seeded_rng(seed))
}

/// Haar-random element of SU(2).
pub fn random_qubit_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R) -> ComplexSquareMatrix<T> {
    let q = random_pure_vector::<T, _>(2, rng);
    let (a, b) = (q[0], q[1]);
    ComplexSquareMatrix::from_row_major(2, vec![a, -b.conj(), b, a.conj()]).expect("2x2")
}

/// Traceless Hermitian matrix with unit Frobenius norm, isotropically distributed.
pub fn random_traceless_direction<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexSquareMatrix<T> {
    loop {
        let g = ComplexSquareMatrix::from_fn(dim, |_, _| complex_normal::<T, _>(rng));
        let mut h = g.hermitian_part();
        let shift = h.trace().re / T::from_usize(dim).unwrap();
        for i in 0..dim {
            h[(i, i)].re = h[(i, i)].re - shift;
            h[(i, i)].im = T::zero();
        }
        let n = h.frobenius_norm();
        if n > T::epsilon() {
            return h.scale(T::one() / n);
        }
    }
}
