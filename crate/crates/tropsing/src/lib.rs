//! Exact combinatorics of sparse curve singularities, sparse resultants and
//! sparse spatial-curve projections, with brute-force oracles for each closed form.

pub mod acceptance;
pub mod census;
pub mod delta;
pub mod geom;
pub mod io;
pub mod lattice;
pub mod poly;
pub mod strata;
pub mod ultratrop;
pub mod vandermonde;

/// Exact rational numbers used throughout.
pub type Rational = num_rational::BigRational;

#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/delta.md")]
    pub mod delta {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    pub mod geometry {}
    #[doc = include_str!("../../../book/src/strata.md")]
    pub mod strata {}
    #[doc = include_str!("../../../book/src/ultratrop.md")]
    pub mod ultratrop {}
    #[doc = include_str!("../../../book/src/census.md")]
    pub mod census {}
    #[doc = include_str!("../../../book/src/vandermonde.md")]
    pub mod vandermonde {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
