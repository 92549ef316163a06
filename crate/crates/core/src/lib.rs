//! cutforge: exact combinatorics of cuts in graphs.
//!
//! Builds trees from nested families of vertex sets, extracts nested
//! generating sets from finite Boolean algebras of cuts by comparing
//! path-counting power series, and computes ends and one-edge-orbit tree
//! actions for groups given by Cayley-graph data.
//!
//! Everything operates on finite graphs. Infinite groups are handled through
//! finite balls of their Cayley graphs, and results derived from balls carry
//! a [`Certificate`] saying so.

pub mod bergman;
pub mod checks;
pub mod cli;
pub mod cuts;
pub mod ends;
mod error;
pub mod graph;
pub mod group;
pub mod io;
pub mod sieve;
pub mod treeops;

pub use error::{Error, Result};

use serde::Serialize;

/// How far a result can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Decided on the whole (finite) object.
    Exact,
    /// Decided on a Cayley ball of the given radius only.
    BallVerified { radius: usize },
}
