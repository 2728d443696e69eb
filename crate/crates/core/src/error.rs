use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid form parameters: {0}")]
    InvalidParams(String),
    #[error("parity violation: x(ax+b) = {value} is odd for a={a}, b={b}, x={x}")]
    Parity { a: i64, b: i64, x: i64, value: i128 },
    #[error("polygonal order m={0} is below 3")]
    PolygonalOrder(i64),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("negative radicand {radicand} in interval {interval} (n too small)")]
    NegativeRadicand {
        interval: &'static str,
        radicand: i128,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A solver or constructor failed where the underlying lemma guarantees success.
    #[error("internal contradiction: {0}")]
    Contradiction(String),
    #[error("limit {limit} exceeds the configured cap {cap}")]
    LimitCap { limit: u64, cap: u64 },
    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),
    #[error("limit {limit} is below the minimum meaningful limit {min} for claim {id}")]
    LimitTooSmall { id: String, limit: u64, min: u64 },
    #[error("i/o: {0}")]
    Io(String),
    #[error("malformed data: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
