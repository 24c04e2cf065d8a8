//! Monochromatic tight components, tight pseudo-walk triangulations and
//! layered connected matchings in 2-edge-coloured k-uniform hypergraphs.

pub mod cli;
pub mod components;
pub mod error;
pub mod format;
pub mod generators;
pub mod kgraph;
pub mod matching;
pub mod plane;
pub mod structure;
pub mod subsets;
pub mod unionfind;
pub mod walks;

pub use error::{Error, Result};
pub use kgraph::{ColouredKGraph, Colour, KEdge, VertexSet};
