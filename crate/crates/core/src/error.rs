use thiserror::Error;

/// Errors raised by the simulation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operand lengths differ: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid Pauli symbol '{0}'")]
    InvalidSymbol(char),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("qubit count {0} exceeds the supported maximum of 64")]
    TooManyQubits(usize),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("control qubit {0} lies inside the operator support")]
    ControlInSupport(usize),

    #[error("rotation generator must not be the identity")]
    IdentityRotation,

    #[error("diagonal evolution requires Z-type terms only, found {0}")]
    NonDiagonal(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("every shot was rejected by post-selection")]
    AllShotsRejected,

    #[error("estimate is singular: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
