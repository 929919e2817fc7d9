//! Dense complex linear algebra for small multi-qubit Hilbert spaces.

mod density;
mod eigen;
mod matrix;
mod sample;

pub use density::{
    apply_local_superoperator, partial_transpose, partial_transpose_subset, qubits_for_dim, DensityMatrix,
    DiagonalView, ProductProjector,
};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, is_psd_within, min_eigenvalue, singular_values, HermitianEigen};
pub use matrix::{pauli, tensor_all, tensor_product, ComplexSquareMatrix};
pub use sample::{
    random_product_projector, random_pure_vector, random_qubit_unitary, random_traceless_direction,
    sample_random_density, sample_random_density_with, sample_random_product_state, sample_random_product_state_with,
    seeded_rng, stream_rng, SeededRng,
};
