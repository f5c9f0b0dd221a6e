//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),

    #[error("product {0} * {1} is not declared in the product table")]
    MissingProduct(String, String),

    #[error("invalid constant `{name}`: {reason}")]
    InvalidConstant { name: String, reason: String },

    #[error("evaluation outside the domain: {0}")]
    Domain(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("rounding of f({n}) could not be certified up to {digits} digits")]
    UncertifiableRounding { n: u64, digits: u32 },

    #[error("rounded value at n = {0} does not fit in i128")]
    Overflow(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no weight in the ladder is compatible with the family")]
    NoCompatibleWeight,

    #[error("weight total is zero up to N = {0}")]
    ZeroWeight(u64),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown verdict: {0}")]
    Unknown(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_) | Error::UnknownConstant(_) | Error::InvalidConstant { .. } => 2,
            Error::Precondition(_)
            | Error::Domain(_)
            | Error::MissingProduct(..)
            | Error::NoCompatibleWeight
            | Error::ZeroWeight(_) => 3,
            Error::UncertifiableRounding { .. } | Error::PrecisionExhausted(_) | Error::Overflow(_) => 4,
            Error::Unknown(_) => 5,
            Error::Io(_) => 1,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
