use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid targets {targets:?} for a {n}-qutrit register: {reason}")]
    InvalidTargets {
        targets: Vec<usize>,
        n: usize,
        reason: &'static str,
    },

    #[error("malformed gate `{name}`: {reason}")]
    MalformedGate { name: String, reason: String },

    #[error("expected an iSWAP^02 or iSWAP^20 matrix")]
    NotIswap,

    #[error("{n} qutrits exceed the dense budget of {max}")]
    BudgetExceeded { n: usize, max: usize },

    #[error("op {op} ({gate}) does not map basis states to basis states")]
    BackendMismatch { op: usize, gate: String },

    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("qutrits {0:?} do not induce a connected subgraph")]
    Disconnected(Vec<usize>),

    #[error("({a}, {b}) is not an edge of the coupling map")]
    MissingEdge { a: usize, b: usize },

    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
