use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operator dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("atom index {index} out of range for a chain of {n_atoms} atoms")]
    AtomIndex { index: usize, n_atoms: usize },

    #[error("invalid atom pair ({0}, {1})")]
    InvalidPair(usize, usize),

    #[error("eigenvalue iteration did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid configuration at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("integration produced non-finite entries at t = {t}")]
    BlowUp { t: f64 },

    #[error("invariant breach at t = {t}: {message}")]
    Invariant { t: f64, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { path: path.into(), message: message.into() }
    }
}
