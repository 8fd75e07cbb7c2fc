//! Generalized entanglement of formation (E_GF) for multi-qubit states.
//!
//! * [`qlinalg`] holds the numerical plumbing: states, density matrices,
//!   partial traces, a Jacobi eigensolver and entropies.
//! * [`bipartite`] covers two-qubit entanglement of formation.
//! * [`tripartite`] evaluates the closed form for three-qubit pure states,
//!   alongside a brute-force path through reduced density matrices.
//! * [`multiparty`] implements the recursive n-party measure and
//!   convex-roof minimization over pure-state decompositions.

pub mod bipartite;
pub mod error;
pub mod multiparty;
pub mod qlinalg;
pub mod tripartite;

pub use error::{EgfError, Result};
pub use multiparty::{Ensemble, OptimizerConfig, OptimizerResult};
pub use qlinalg::{DensityMatrix, PureState};
