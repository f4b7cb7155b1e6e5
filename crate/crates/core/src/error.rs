use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} would reach {requested}, above the configured limit of {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: String,
        limit: u64,
    },

    #[error("arithmetic overflow in a fixed-width scalar type")]
    Overflow,

    #[error("lattice minima truncated: found {found} of {requested} minima with norm cap {cap}")]
    Truncated {
        requested: usize,
        found: usize,
        cap: u64,
    },

    #[error("no type-preserving integer set found at precisions {attempted:?} (fractional bits)")]
    PrecisionExhausted { attempted: Vec<u32> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
