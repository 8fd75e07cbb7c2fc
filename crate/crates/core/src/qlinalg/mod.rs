//! Numerical foundation: complex matrices, pure states over labeled qubits,
//! partial traces, Hermitian spectra and entropies.

pub mod density;
pub mod eigen;
pub mod entropy;
pub mod matrix;
pub mod state;

pub use density::{DensityMatrix, Spectrum};
pub use eigen::{hermitian_eigen, HermitianEigen};
pub use entropy::{binary_entropy, shannon_entropy, von_neumann_entropy};
pub use matrix::{pauli, CMatrix};
pub use state::{
    apply_local_unitary, random_product_state, random_pure_state, random_unitary_2x2, PureState,
    MAX_QUBITS,
};

/// Eigenvalues of a density matrix (descending, clamped, renormalized).
pub fn hermitian_eigenvalues(rho: &DensityMatrix) -> crate::Result<Spectrum> {
    rho.spectrum()
}

/// Traces the labels in `drop` out of `rho`.
pub fn partial_trace(rho: &DensityMatrix, drop: &[usize]) -> crate::Result<DensityMatrix> {
    rho.partial_trace(drop)
}

/// Display name of a qubit label: 0 -> 'A', 1 -> 'B', ...
pub fn party_name(label: usize) -> char {
    (b'A' + label as u8) as char
}
