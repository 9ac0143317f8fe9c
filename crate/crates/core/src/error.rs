use thiserror::Error;

/// Errors produced by the linear-algebra and categorical operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },
    #[error("square does not commute")]
    NonCommutingSquare,
    #[error("index map is not cofinal: {0}")]
    NotCofinal(String),
    #[error("identity is not below the index map at {0}")]
    NotAboveIdentity(i64),
    #[error("malformed window: {invariant} at {location}")]
    Malformed { invariant: &'static str, location: String },
    #[error("endpoint mismatch in {0}")]
    EndpointMismatch(&'static str),
    #[error("window underflow: {0}")]
    WindowUnderflow(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch(op: &'static str, detail: impl Into<String>) -> Error {
    Error::DimensionMismatch { op, detail: detail.into() }
}
