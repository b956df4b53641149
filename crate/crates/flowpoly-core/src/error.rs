use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("edge budget exceeded: {edges} edges > {budget}")]
    Budget { edges: usize, budget: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("structural check failed: {0}")]
    Structure(String),
    #[error("prime {0} rejected: denominator not invertible")]
    BadPrime(u64),
    #[error("checksum failure: {0}")]
    Checksum(String),
    #[error("no sign change: {0}")]
    NoSignChange(String),
    #[error("did not converge: {0}")]
    NoConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
