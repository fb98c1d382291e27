use thiserror::Error;

use crate::groups::GroupTag;

/// Errors raised by the library.
///
/// [`Error::is_internal`] separates broken invariants (a bug or falsified
/// mathematical claim) from bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group of order {0} exceeds the catalog bound of 24")]
    GroupTooLarge(usize),
    #[error("group of order {0} is not isomorphic to any catalog group")]
    NotInCatalog(usize),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("unsupported stabilizer {tag} for {context}")]
    UnsupportedTag { tag: GroupTag, context: &'static str },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("complex is not rigid; stabilizers must fix their cells pointwise")]
    NonRigid,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent census: {0}")]
    Census(String),
    #[error("not a chain complex: {0}")]
    NotAChainComplex(String),
    #[error("base-changed differential is not block-diagonal: {0}")]
    OffBlockEntries(String),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotAChainComplex(_) | Error::OffBlockEntries(_) | Error::Invariant(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
