use thiserror::Error;

use crate::binmat::FeasibilityViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group descriptor `{0}`")]
    Descriptor(String),

    #[error("malformed group table: {0}")]
    Table(String),

    #[error("group order must be positive")]
    ZeroOrder,

    #[error("element {elem} is not in a group of order {order}")]
    NotInGroup { elem: usize, order: usize },

    #[error("operation requires an abelian group")]
    NonAbelian,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid ordering: {0}")]
    Ordering(String),

    #[error("malformed matrix: {0}")]
    Matrix(String),

    #[error("infeasible weight sequences: {0}")]
    Infeasible(FeasibilityViolation),

    #[error("not a near alternating sign matrix: {0}")]
    NotNasm(String),

    #[error("invalid parameters: {0}")]
    Parameters(String),

    /// A structural guarantee that should hold unconditionally was violated.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::Parameters(msg.into())
    }
}
