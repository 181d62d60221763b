//! Exact convex geometry over the rationals in dimension at most 4.

pub mod fiber;
pub mod hull;
pub mod mixed;
pub mod polygon;
pub mod polytope;

use thiserror::Error;

pub use fiber::{fiber_polygon, mixed_fiber_polygon};
pub use mixed::{mixed_volume, mixed_volume_rational, sublattice_mixed_volume, sublattice_mixed_volume_rational};
pub use polygon::{mixed_area, Polygon};
pub use polytope::{convex_hull, lattice_volume, minkowski_sum, LatticePolytope, PolytopeJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("no points given")]
    Empty,
    #[error("dimension {0} unsupported (at most 4)")]
    DimensionUnsupported(usize),
    #[error("inconsistent ambient dimensions")]
    DimensionMismatch,
    #[error("polytope of affine dimension {adim} is not full-dimensional in Q^{dim}")]
    NotFullDimensional { dim: usize, adim: usize },
    #[error("not a Minkowski summand: {0}")]
    NotASummand(String),
    #[error("no common {needed}-dimensional subspace: the differences span {found} dimensions")]
    NotCoplanar { needed: usize, found: usize },
    #[error("expected an integer, got {0}")]
    NonIntegral(String),
    #[error("zero denominator in rational input")]
    ZeroDenominator,
    #[error("coordinate overflow")]
    Overflow,
}
