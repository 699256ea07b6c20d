use thiserror::Error;

/// Errors raised while constructing groups, transversals and the derived
/// algebraic structures. Verification failures are not errors; they are
/// reported through [`crate::report::Report`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("not a transversal: {0}")]
    NotTransversal(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
