//! Extremal spectral graph theory on surfaces.
//!
//! Builds the extremal families of graphs embeddable on a surface of given
//! Euler genus, computes their spectral radii by independent routes and
//! checks the combinatorial and topological facts around them.

pub mod construction;
pub mod embedding;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod numeric;
pub mod spectral;
pub mod w3max;
pub mod walks;

pub use error::{Error, Result};
pub use graph::Graph;
