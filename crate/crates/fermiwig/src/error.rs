use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("series did not terminate within {0} steps")]
    NonTerminating(usize),
    #[error("exponential argument has a nonzero scalar part")]
    ScalarPart,
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("mode count mismatch: {0} vs {1}")]
    ModeMismatch(usize, usize),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("generator registry full ({0} generators)")]
    RegistryFull(usize),
    #[error("invalid spin matrix: {0}")]
    InvalidEpsilon(String),
    #[error("ring `{0}` has no square root of two")]
    NoSqrt2(&'static str),
    #[error("non-unit weights are only supported by Grassmann contractions")]
    Weights,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("memory guard: K·S = {0} exceeds 12")]
    MemoryGuard(usize),
    #[error("suite `{suite}` is incompatible with ring `{ring}`")]
    SuiteRing { suite: String, ring: String },
}

pub type Result<T> = std::result::Result<T, Error>;
