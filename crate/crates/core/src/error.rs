use thiserror::Error;

use crate::graph::EdgeKey;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeKey),
    #[error("loop at vertex {0}")]
    Loop(u32),
    #[error("edge {edge} has an endpoint outside 0..{n}")]
    EndpointOutOfRange { edge: EdgeKey, n: usize },
    #[error("{0} is not an edge of the host graph")]
    NotHostEdge(EdgeKey),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("size guard exceeded: {what} = {actual} > {limit}")]
    SizeGuard {
        what: &'static str,
        actual: u64,
        limit: u64,
    },
    #[error("threshold |R u S| = {0} was never reached")]
    ThresholdNotReached(usize),
    #[error("malformed trace at event {index}: {reason}")]
    MalformedTrace { index: usize, reason: String },
    #[error("segments {0} and {1} overlap or cross")]
    CrossingSegments(usize, usize),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
