use thiserror::Error;

use crate::perm::MAX_DEGREE;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("degree {0} exceeds the supported maximum of {MAX_DEGREE}")]
    DegreeTooLarge(usize),

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("budget exceeded: {what} (limit {limit})")]
    Budget { what: &'static str, limit: u128 },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("group is not transitive")]
    NotTransitive,

    #[error("not a block system: {0}")]
    NotBlockSystem(String),

    #[error("unknown group key `{0}`")]
    UnknownGroup(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
