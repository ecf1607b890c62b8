//! Knot Floer homology of grid diagrams over GF(2), tilde flavor.

mod complex;
mod grid;

pub use complex::{hfk_delta_ranks, tilde_complex, GridComplex, HfkReport};
pub use grid::{GridDiagram, GridError};

/// Largest grid size accepted by default.
pub const DEFAULT_GRID_LIMIT: usize = 8;
