use thiserror::Error;

/// Errors raised by graph construction, parsing and the lattice routines.
///
/// Certification failures are not errors; they are reported through
/// [`crate::volume::Status`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("boundary index {0} is not a corner (expected 0..=3)")]
    BoundaryIndex(usize),
    #[error("vertex `{0}` does not exist")]
    UnknownVertex(String),
    #[error("vertex `{0}` already exists")]
    DuplicateVertex(String),
    #[error("vertices `{0}` and `{1}` are not adjacent")]
    NotAdjacent(String, String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex `{0}` is not white")]
    NotWhite(String),
    #[error("divisor classes live on different blowups ({0} vs {1} exceptional classes)")]
    LatticeMismatch(usize, usize),
    #[error("discrepancy vector does not match the black vertices of the graph")]
    DiscrepancyMismatch,
    #[error("the graph has no boundary curve")]
    NoBoundary,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular linear system")]
    Singular,
    #[error("Stern-Brocot coordinate overflow")]
    Overflow,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
