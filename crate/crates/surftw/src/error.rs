//! Crate-wide error type and validation reports.
//!
//! Every fallible operation returns one of the stable error codes below;
//! the CLI maps them onto exit codes. Structural checks that are expected
//! to enumerate problems (rather than stop at the first) return a
//! [`ValidationReport`] instead.

use thiserror::Error;

/// Errors raised by operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The map or hypergraph is not connected where connectivity is required.
    #[error("DISCONNECTED: {0}")]
    Disconnected(String),
    /// The embedding is not 2-cell (or 2-cellness is unknown after contraction).
    #[error("NOT_TWO_CELL: {0}")]
    NotTwoCell(String),
    /// An exhaustive computation exceeds its configured budget.
    #[error("TOO_LARGE: {0}")]
    TooLarge(String),
    /// The supplied parts do not partition the edge set.
    #[error("BAD_PARTITION: {0}")]
    BadPartition(String),
    /// An edge subset is empty or covers everything where it must not.
    #[error("BAD_SUBSET: {0}")]
    BadSubset(String),
    /// A restriction was attempted without its border lying inside a bag.
    #[error("BORDER_NOT_COVERED: {0}")]
    BorderNotCovered(String),
    /// The edge is not troublesome, so it has no e-partition.
    #[error("NOT_TROUBLESOME: {0}")]
    NotTroublesome(String),
    /// The edge set is not connected with respect to the radial embedding.
    #[error("NOT_PI_CONNECTED: {0}")]
    NotPiConnected(String),
    /// The given tree is not a valid partitioning tree of the hypergraph.
    #[error("BAD_TREE: {0}")]
    BadTree(String),
    /// Malformed input data.
    #[error("BAD_INPUT: {0}")]
    BadInput(String),
    /// A leaf was passed where an internal tree node is required.
    #[error("NOT_INTERNAL: {0}")]
    NotInternal(String),
    /// The hypergraph has no edges.
    #[error("NO_EDGES: {0}")]
    NoEdges(String),
    /// An edge label does not exist in the hypergraph.
    #[error("BAD_EDGE: {0}")]
    BadEdge(String),
    /// The tree fails the p-tree conditions.
    #[error("NOT_PTREE: {0}")]
    NotPtree(String),
    /// A computed structure does not match its expected shape.
    #[error("STRUCTURE_MISMATCH: {0}")]
    StructureMismatch(String),
    /// An internal invariant failed; the message carries a reproduction dump.
    #[error("INTERNAL: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code, without the message.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Disconnected(_) => "DISCONNECTED",
            Error::NotTwoCell(_) => "NOT_TWO_CELL",
            Error::TooLarge(_) => "TOO_LARGE",
            Error::BadPartition(_) => "BAD_PARTITION",
            Error::BadSubset(_) => "BAD_SUBSET",
            Error::BorderNotCovered(_) => "BORDER_NOT_COVERED",
            Error::NotTroublesome(_) => "NOT_TROUBLESOME",
            Error::NotPiConnected(_) => "NOT_PI_CONNECTED",
            Error::BadTree(_) => "BAD_TREE",
            Error::BadInput(_) => "BAD_INPUT",
            Error::NotInternal(_) => "NOT_INTERNAL",
            Error::NoEdges(_) => "NO_EDGES",
            Error::BadEdge(_) => "BAD_EDGE",
            Error::NotPtree(_) => "NOT_PTREE",
            Error::StructureMismatch(_) => "STRUCTURE_MISMATCH",
            Error::Internal(_) => "INTERNAL",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Outcome of a structural validation; empty `violations` means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    /// Converts into a `Result`, using `make` to wrap the joined violations.
    pub fn into_result(self, make: impl FnOnce(String) -> Error) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(make(self.violations.join("; ")))
        }
    }
}
