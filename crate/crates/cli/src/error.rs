use egf_core::EgfError;
use thiserror::Error;

/// Failures of a command, each mapped to a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: line {line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown state '{0}' (try `egf known --list`)")]
    UnknownName(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Normalization(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("optimizer budget exhausted before convergence")]
    BudgetExhausted,
    #[error(transparent)]
    Core(#[from] EgfError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::UnknownName(_) | CliError::Usage(_) => 1,
            CliError::Normalization(_) => 2,
            CliError::Core(EgfError::Normalization { .. } | EgfError::WeightNormalization { .. }) => 2,
            CliError::Mismatch(_) => 3,
            CliError::BudgetExhausted | CliError::Core(EgfError::BudgetExceeded { .. }) => 4,
            CliError::Core(_) => 1,
        }
    }
}
