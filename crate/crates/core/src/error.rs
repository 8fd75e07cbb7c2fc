use thiserror::Error;

/// Errors raised by the entanglement routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EgfError {
    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("state norm squared {norm_sq} is too far from 1")]
    Normalization { norm_sq: f64 },

    #[error("ensemble weights sum to {sum}, expected 1")]
    WeightNormalization { sum: f64 },

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("density matrix has trace {trace}, expected 1")]
    Trace { trace: f64 },

    #[error("eigenvalue {value:e} outside [0, 1]")]
    InvalidSpectrum { value: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("evaluation budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
}

pub type Result<T> = std::result::Result<T, EgfError>;
