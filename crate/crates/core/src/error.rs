use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("non-integer exponent at position {position}")]
    BadExponent { position: usize },

    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("polynomial `{0}` is not homogeneous")]
    Inhomogeneous(String),

    #[error("entry `{poly}` has degree {found} but {expected} was required")]
    WrongDegree { poly: String, found: String, expected: String },

    #[error("invalid truncation: {0}")]
    Truncation(String),

    #[error("complexes live over different rings")]
    RingMismatch,

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("differentials do not square to zero at index {0}")]
    NotAComplex(i32),

    #[error("invalid centre: {0}")]
    InvalidCentre(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
