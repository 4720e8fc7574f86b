//! Generalized Hamming graphs and the combinatorics of their singular
//! endomorphisms.
//!
//! The crate models graphs whose vertices are mixed-radix tuples and whose
//! edges connect tuples at a prescribed set of Hamming distances. On top of
//! that it provides:
//!
//! - layer machinery (axis-aligned sublattices) in [`graph`];
//! - Latin hypercubes and hypercuboids with validation and exhaustive
//!   enumeration in [`latin`];
//! - maximal clique enumeration and classification in [`cliques`];
//! - exact-cover counting (partitions into layers or cliques) in [`cover`]
//!   and [`partitions`];
//! - an exhaustive endomorphism search engine with structural verification
//!   in [`endo`], plus the layer/hypercube construction that generates
//!   singular endomorphisms in [`construct`];
//! - closed-form counting formulas and formula-vs-search crosschecks in
//!   [`formulas`].

pub mod error;

mod bits;

pub mod cliques;
pub mod construct;
pub mod cover;
pub mod endo;
pub mod formulas;
pub mod graph;
pub mod latin;
pub mod partitions;

pub use error::{Error, Result};
pub use graph::{GraphParams, Layer, LayerSystem, VertexId};
