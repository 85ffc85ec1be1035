use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid length for {what}: expected {expected} bytes, got {got}")]
    InvalidLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("polynomial is in the {found} domain, operation requires {expected}")]
    DomainMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the accelerated backend is not available on this CPU")]
    BackendUnavailable,

    #[error("signing exceeded {0} rejection iterations")]
    RejectionLimit(u32),

    #[error("clock frequency must be positive and finite, got {0}")]
    InvalidClock(f64),

    #[error("operation mismatch: {0}")]
    OperationMismatch(String),

    #[error("{op} is not supported for {scheme}")]
    Unsupported { scheme: String, op: String },

    #[error("{scheme}: reference and accelerated backends diverge ({detail})")]
    BackendDivergence { scheme: String, detail: String },

    #[error("provider error: {0}")]
    Provider(String),
}

impl Error {
    pub(crate) fn length(what: &'static str, expected: usize, got: usize) -> Self {
        Error::InvalidLength {
            what,
            expected,
            got,
        }
    }
}
