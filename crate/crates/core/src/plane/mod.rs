//! Nearly triangulated plane graphs, triangulations of closed walks, and the
//! Hex-style extraction of monochromatic walks.

mod graph;
mod hex;
mod triangulate;

pub use graph::{same_cycle, PlaneGraph};
pub use hex::{hex_walk, HexWalk};
pub use triangulate::{
    ring_sets, triangulate, triangulate_rings, validate_triangulation, PlaneVertex, Rings, Triangulation,
    TriangulationExport, DEFAULT_THRESHOLD,
};
