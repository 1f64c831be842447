use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid system size {n}: {reason}")]
    InvalidSize { n: usize, reason: &'static str },

    #[error("site {site} out of range for {num_sites} sites")]
    SiteOutOfRange { site: usize, num_sites: usize },

    #[error("bond {bond} out of range for {num_sites} sites")]
    BondOutOfRange { bond: usize, num_sites: usize },

    #[error("two-qubit gate needs distinct sites, got {0} twice")]
    SameSite(usize),

    #[error("gate `{label}` has arity {arity}, expected {expected}")]
    WrongArity { label: String, arity: usize, expected: usize },

    #[error("gate `{label}` is not unitary (max deviation {deviation:e})")]
    NonUnitary { label: String, deviation: f64 },

    #[error("gate matrix must be 2x2 or 4x4, got {rows}x{cols}")]
    BadGateShape { rows: usize, cols: usize },

    #[error("SVD failed to converge on a {rows}x{cols} matrix")]
    SvdNonConvergence { rows: usize, cols: usize },

    #[error("bitstring length {got} does not match {expected} sites")]
    LengthMismatch { got: usize, expected: usize },

    #[error("bond dimension {chi} out of range: {reason}")]
    InvalidBondDim { chi: usize, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size mismatch: state has {state} qubits, graph has {graph} vertices")]
    SizeMismatch { state: usize, graph: usize },

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
