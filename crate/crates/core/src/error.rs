use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("label {label} does not divide the conductor {conductor}")]
    LabelNotDividing { label: u32, conductor: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is not supported here (need an odd prime below 2^31)")]
    UnsupportedPrime(u64),
    #[error("{what} exceeded cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("diagram is not definite")]
    NotDefinite,
    #[error("expected exactly one ringed node, found {0}")]
    RingCount(usize),
    #[error("removed set contains a ringed node")]
    RemovesRing,
    #[error("diagram is not connected")]
    Disconnected,
    #[error("vertex link is infinite (parabolic {0} is not definite)")]
    InfiniteLink(String),
    #[error("integer overflow in exact orbit arithmetic")]
    Overflow,
    #[error("graph is not regular at level {level}: witness clique {witness:?}")]
    Irregular { level: usize, witness: Vec<usize> },
    #[error("graph is not connected")]
    GraphDisconnected,
    #[error("graph too large: {n} vertices (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
