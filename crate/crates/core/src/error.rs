use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vectors are linearly dependent or empty")]
    Degenerate,
    #[error("sublattice must have rank at least 1")]
    ZeroRank,
    #[error("logarithm of a non-positive number")]
    NonPositiveLog,
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a flag: {0}")]
    NotAFlag(String),
    #[error("weights must be strictly decreasing")]
    WeightsNotDecreasing,
    #[error("map does not have the requested property: {0}")]
    WrongMapKind(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("{0} requires exact enumeration but only a lower bound is available")]
    NotExact(String),
    #[error("precision cap reached while deciding a sign")]
    PrecisionCap,
    #[error("invalid input at {path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Input {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
