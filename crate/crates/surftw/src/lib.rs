//! Tree-width duality for hypergraphs embedded in surfaces.
//!
//! The crate models 2-cell embeddings of hypergraphs in arbitrary closed
//! surfaces through signed rotation systems, and provides the machinery to
//! compare the tree-width of an embedded hypergraph with the tree-width of
//! its surface dual:
//!
//! * [`map`] - combinatorial maps (signed rotation systems), face tracing,
//!   Euler genus, duality and the corner construction;
//! * [`embed`] - embedded hypergraphs as bipartite incidence maps, their
//!   duals and radial structures;
//! * [`hypergraph`] - abstract hypergraphs, tree decompositions, an exact
//!   tree-width oracle and brambles;
//! * [`pi`] - the carried radial structure that survives contractions, and
//!   the connectivity notions derived from it;
//! * [`ptree`] - partitioning trees and the decompositions they induce;
//! * [`synthesis`] - construction of width-optimal partitioning trees;
//! * [`duality`] - the duality bound checker and the small-instance fuzzing
//!   harness behind it;
//! * [`extremal`] - grid, triple-grid and surface-linked families showing
//!   the bound is close to tight, plus face-width checks;
//! * [`formats`] - serialization of every artifact (JSON, PACE, DOT).

pub mod duality;
pub mod embed;
pub mod error;
pub mod extremal;
pub mod formats;
pub mod hypergraph;
pub mod map;
pub mod pi;
pub mod ptree;
pub mod synthesis;

pub use error::{Error, Result, ValidationReport};

#[cfg(test)]
pub(crate) mod testutil;
