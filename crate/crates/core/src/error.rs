use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown neuron {0}")]
    UnknownNeuron(String),
    #[error("invalid neuron name {0:?} (expected [A-Za-z0-9_.]+)")]
    InvalidName(String),
    #[error("duplicate declaration of neuron {0}")]
    DuplicateNeuron(String),
    #[error("circuit has no {0} neuron")]
    MissingTerminal(&'static str),
    #[error("input and output must be distinct neurons")]
    InputIsOutput,
    #[error("silence mask covers {mask} neurons but the circuit has {circuit}")]
    MaskMismatch { mask: usize, circuit: usize },
    #[error("{0}")]
    Format(#[from] crate::format::FormatError),
    #[error("{0}")]
    Qdimacs(#[from] crate::qbf::QdimacsError),
    #[error("{what}: {actual} exceeds the limit of {limit}")]
    LimitExceeded { what: &'static str, limit: u64, actual: u64 },
    #[error("formula is not in normal form: {}", .0.join("; "))]
    NotNormalized(Vec<String>),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
