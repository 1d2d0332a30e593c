use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid Pauli string {input:?}: {reason}")]
    InvalidPauli { input: String, reason: String },

    #[error("invalid device spec, field `{field}`: {reason}")]
    InvalidDevice { field: String, reason: String },

    #[error("invalid code spec, field `{field}`: {reason}")]
    InvalidCode { field: String, reason: String },

    #[error("invalid extraction target: {0}")]
    InvalidTarget(String),

    #[error("no pi-pulse frame assignment cancels term {term}")]
    InfeasibleFrame { term: String },

    #[error("support of {target} is disconnected in the coupling graph; unreachable qubits {component:?}")]
    DisconnectedSupport { target: String, component: Vec<usize> },

    #[error("unsupported coupling: {0}")]
    UnsupportedCoupling(String),

    #[error("malformed schedule nesting: {0}")]
    MalformedNesting(String),

    #[error("schedule generates {generated}, expected {expected}")]
    VerifyMismatch { generated: String, expected: String },

    #[error("qubit {qubit} of {generator} carries {letter}, pivot must be X or Y")]
    InvalidPivot { generator: String, qubit: usize, letter: char },

    #[error("invalid encoding plan: {0}")]
    InvalidPlan(String),

    #[error("{n} qubits exceed the dense-simulation limit of {limit}; use symbolic verification instead")]
    TooLarge { n: usize, limit: usize },

    #[error("eigenphase {phase} sits on the logarithm branch cut; shorten the evolution time")]
    BranchCut { phase: f64 },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: String, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn device(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidDevice { field: field.into(), reason: reason.into() }
    }

    pub(crate) fn code(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidCode { field: field.into(), reason: reason.into() }
    }

    pub(crate) fn argument(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidArgument { name: name.into(), reason: reason.into() }
    }
}
