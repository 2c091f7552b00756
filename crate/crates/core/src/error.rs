use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("partition of {n} antennas into {k} sub-arrays of {p} is not exact")]
    InvalidPartition { n: usize, k: usize, p: usize },

    #[error("vector lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("user coincides with the center of sub-array {index}")]
    DegenerateGeometry { index: usize },

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("no root of {0} in the search bracket")]
    NoRoot(&'static str),

    #[error("array cannot satisfy constraints: {0}")]
    Infeasible(&'static str),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
