//! Exact polynomial arithmetic over the rationals and over cyclotomic fields.

pub mod cyclotomic;
pub mod fulton;
mod jet;
pub mod resultant;
pub mod sparse;
pub mod univariate;

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

pub use cyclotomic::{cyclotomic_polynomial, cyclotomic_rank, CyclotomicElement};
pub use fulton::{bivariate_gcd, divided_difference, fulton_intersection_number};
pub use resultant::sylvester_resultant;
pub use sparse::SparsePoly;
pub use univariate::UniPoly;

use crate::Rational;

/// A local intersection multiplicity: a nonnegative integer, or infinite when
/// the curves share a component through the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn finite(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(v) => Some(v),
            Multiplicity::Infinite => None,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(v) => write!(f, "{v}"),
            Multiplicity::Infinite => write!(f, "INFINITE"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(v) => s.serialize_u64(*v),
            Multiplicity::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

/// The operations Gaussian elimination and proportionality tests need.
pub trait FieldElement: Clone + PartialEq {
    fn vanishes(&self) -> bool;
    fn times(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl FieldElement for Rational {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational::one() / self)
    }
}

/// Rank by Gaussian elimination with exact inverses.
pub fn rank<F: FieldElement>(m: &[Vec<F>]) -> usize {
    let mut a: Vec<Vec<F>> = m.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].vanishes()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inverse().expect("nonzero pivot");
        let pivot_row = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            if row[c].vanishes() {
                continue;
            }
            let f = row[c].times(&inv);
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = x.minus(&f.times(y));
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rank() {
        let q = |v: i64| Rational::from_integer(v.into());
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&m), 2);
        assert_eq!(rank::<Rational>(&[]), 0);
    }
}
