//! Reduced Khovanov homology over GF(2) and the integers.
//!
//! Gradings are stored as integers `(i, 2j)`; the marked circle is always
//! labelled `x`, and the unknot sits at `(0, 0)`.

mod bracket;
mod cube;
mod ranks;
mod skein;

use thiserror::Error;

use crate::diagram::PlanarDiagram;
use crate::linalg::SnfError;

pub use bracket::{jones_polynomial, kauffman_bracket};
pub use cube::KhComplex;
pub use ranks::{BigradedRanks, DeltaRanks, Ring};
pub use skein::{check_skein_grading, SkeinReport};

/// Default largest crossing count for the cube of resolutions.
pub const DEFAULT_CUBE_LIMIT: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KhError {
    #[error("{n} crossings exceed the cube limit {limit}")]
    CubeTooLarge { n: usize, limit: usize },
    #[error("diagram has no component to mark")]
    NoMarkedArc,
    #[error(transparent)]
    Snf(#[from] SnfError),
}

pub fn khovanov_reduced_f2(d: &PlanarDiagram, limit: usize) -> Result<BigradedRanks, KhError> {
    Ok(KhComplex::build(d, limit)?.homology_f2())
}

pub fn khovanov_reduced_z(d: &PlanarDiagram, limit: usize) -> Result<BigradedRanks, KhError> {
    KhComplex::build(d, limit)?.homology_z()
}

/// Collapses `(i, 2j)` ranks to `2δ = 2j - 2i`.
pub fn delta_collapse(r: &BigradedRanks) -> DeltaRanks {
    r.delta_collapse()
}

pub fn is_sigma_thin(r: &BigradedRanks, sigma: i64) -> bool {
    r.is_sigma_thin(sigma)
}

/// Graded Euler characteristic in `s = q^{1/2}`.
pub fn jones_via_euler(r: &BigradedRanks) -> crate::poly::Laurent {
    r.euler_characteristic()
}
