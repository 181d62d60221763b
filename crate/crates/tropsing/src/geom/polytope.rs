use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::hull::{self, Facet, MAX_DIM};
use super::GeomError;
use crate::Rational;

/// A convex polytope with rational vertices in `Q^dim`, `dim <= 4`.
///
/// Vertices are stored as integer numerators over one shared positive
/// denominator; facet offsets refer to those scaled coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    adim: usize,
    den: i64,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    scaled_volume: i128,
}

impl LatticePolytope {
    /// Hull of integer points.
    pub fn from_lattice_points(points: &[Vec<i64>]) -> Result<Self, GeomError> {
        Self::from_scaled(points, 1)
    }

    /// Hull of the points `points / den`.
    pub fn from_scaled(points: &[Vec<i64>], den: i64) -> Result<Self, GeomError> {
        let first = points.first().ok_or(GeomError::Empty)?;
        let dim = first.len();
        if dim > MAX_DIM {
            return Err(GeomError::DimensionUnsupported(dim));
        }
        if dim == 0 {
            return Err(GeomError::DimensionUnsupported(0));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(GeomError::DimensionMismatch);
        }
        assert!(den > 0);
        let h = hull::hull(points);
        Ok(LatticePolytope {
            dim,
            adim: h.adim,
            den,
            vertices: h.vertices,
            facets: h.facets,
            scaled_volume: h.scaled_volume,
        }
        .reduced())
    }

    /// Hull of rational points.
    pub fn from_rational_points(points: &[Vec<Rational>]) -> Result<Self, GeomError> {
        let den = points
            .iter()
            .flatten()
            .fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let den_i = den.to_i64().ok_or(GeomError::Overflow)?;
        let scaled = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|q| (q.numer() * (&den / q.denom())).to_i64().ok_or(GeomError::Overflow))
                    .collect::<Result<Vec<i64>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_scaled(&scaled, den_i)
    }

    /// Divides out a common factor of the denominator and all numerators.
    fn reduced(mut self) -> Self {
        let g = self.vertices.iter().flatten().fold(self.den, |g, &c| g.gcd(&c));
        if g > 1 {
            for v in &mut self.vertices {
                v.iter_mut().for_each(|c| *c /= g);
            }
            let h = hull::hull(&self.vertices);
            self.den /= g;
            self.facets = h.facets;
            self.scaled_volume = h.scaled_volume;
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Affine dimension.
    pub fn adim(&self) -> usize {
        self.adim
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn scaled_vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn is_lattice(&self) -> bool {
        self.den == 1
    }

    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        self.vertices
            .iter()
            .map(|v| v.iter().map(|&c| Rational::new(c.into(), self.den.into())).collect())
            .collect()
    }

    /// Facets as `(primitive normal, support value)`.
    pub fn facets(&self) -> Vec<(Vec<i64>, Rational)> {
        self.facets
            .iter()
            .map(|f| (f.normal.clone(), Rational::new(f.offset.into(), self.den.into())))
            .collect()
    }


    /// The same polytope written over denominator `den`, a multiple of the current one.
    pub(crate) fn rescaled_vertices(&self, den: i64) -> Vec<Vec<i64>> {
        let f = den / self.den;
        self.vertices.iter().map(|v| v.iter().map(|c| c * f).collect()).collect()
    }

    /// Maximum of an integer functional over the polytope.
    pub fn support(&self, functional: &[i64]) -> Rational {
        let best = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(functional).map(|(a, b)| a * b).sum::<i64>())
            .max()
            .expect("polytope is nonempty");
        Rational::new(best.into(), self.den.into())
    }

    pub fn translate(&self, shift: &[Rational]) -> Result<Self, GeomError> {
        let pts: Vec<Vec<Rational>> = self
            .vertices()
            .into_iter()
            .map(|v| v.iter().zip(shift).map(|(a, b)| a + b).collect())
            .collect();
        Self::from_rational_points(&pts)
    }

    /// Image under an integer linear map given by its matrix rows (`target_dim x dim`).
    pub fn linear_image(&self, rows: &[Vec<i64>]) -> Result<Self, GeomError> {
        let pts: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
            .collect();
        Self::from_scaled(&pts, self.den)
    }
}

/// Serialized form: vertices as exact `[numerator, denominator]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub vertices: Vec<Vec<[i64; 2]>>,
}

pub(crate) fn rational_pair(q: &Rational) -> [i64; 2] {
    [
        q.numer().to_i64().expect("numerator fits in i64"),
        q.denom().to_i64().expect("denominator fits in i64"),
    ]
}

impl From<&LatticePolytope> for PolytopeJson {
    fn from(p: &LatticePolytope) -> Self {
        PolytopeJson { vertices: p.vertices().iter().map(|v| v.iter().map(rational_pair).collect()).collect() }
    }
}

impl TryFrom<&PolytopeJson> for LatticePolytope {
    type Error = GeomError;
    fn try_from(j: &PolytopeJson) -> Result<Self, GeomError> {
        let pts: Vec<Vec<Rational>> = j
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|[n, d]| {
                        if *d == 0 {
                            Err(GeomError::ZeroDenominator)
                        } else {
                            Ok(Rational::new((*n).into(), (*d).into()))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        LatticePolytope::from_rational_points(&pts)
    }
}

/// Spec-level hull operation on rational points.
pub fn convex_hull(points: &[Vec<Rational>]) -> Result<LatticePolytope, GeomError> {
    LatticePolytope::from_rational_points(points)
}

/// `d! * volume`; integral for lattice polytopes.
pub fn lattice_volume(p: &LatticePolytope) -> Result<Rational, GeomError> {
    if p.adim != p.dim {
        return Err(GeomError::NotFullDimensional { dim: p.dim, adim: p.adim });
    }
    let den = BigInt::from(p.den).pow(p.dim as u32);
    Ok(Rational::new(BigInt::from(p.scaled_volume), den))
}

pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope, GeomError> {
    minkowski_sum_all(&[p, q])
}

pub(crate) fn minkowski_sum_all(ps: &[&LatticePolytope]) -> Result<LatticePolytope, GeomError> {
    let first = ps.first().ok_or(GeomError::Empty)?;
    if ps.iter().any(|p| p.dim != first.dim) {
        return Err(GeomError::DimensionMismatch);
    }
    let den = ps.iter().fold(1i64, |l, p| l.lcm(&p.den));
    let mut acc: Vec<Vec<i64>> = vec![vec![0; first.dim]];
    for p in ps {
        let verts = p.rescaled_vertices(den);
        let sums: Vec<Vec<i64>> = acc
            .iter()
            .flat_map(|a| verts.iter().map(move |v| a.iter().zip(v).map(|(x, y)| x + y).collect()))
            .collect();
        acc = hull::hull(&sums).vertices;
    }
    LatticePolytope::from_scaled(&acc, den)
}

pub(crate) fn to_u64(q: &Rational) -> Result<u64, GeomError> {
    if !q.is_integer() || q.is_negative() {
        return Err(GeomError::NonIntegral(q.to_string()));
    }
    q.to_integer().to_u64().ok_or(GeomError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn triangle_volumes() {
        let t = LatticePolytope::from_lattice_points(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(lattice_volume(&t).unwrap(), q(1, 1));
        let t = LatticePolytope::from_lattice_points(&[vec![0, 0], vec![3, 0], vec![0, 2]]).unwrap();
        assert_eq!(lattice_volume(&t).unwrap(), q(6, 1));
    }

    #[test]
    fn cube_volumes_are_factorials() {
        for d in 1..=4usize {
            let pts: Vec<Vec<i64>> = (0..1 << d).map(|m: i64| (0..d).map(|i| (m >> i) & 1).collect()).collect();
            let c = LatticePolytope::from_lattice_points(&pts).unwrap();
            let fact: i64 = (1..=d as i64).product();
            assert_eq!(lattice_volume(&c).unwrap(), q(fact, 1));
        }
    }

    #[test]
    fn rational_hull_reduces_denominator() {
        let p = convex_hull(&[vec![q(0, 1), q(0, 1)], vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(1, 2)]]).unwrap();
        assert_eq!(p.denominator(), 2);
        assert_eq!(lattice_volume(&p).unwrap(), q(1, 4));
        let p = convex_hull(&[vec![q(2, 2)], vec![q(4, 2)]]).unwrap();
        assert_eq!(p.denominator(), 1);
    }

    #[test]
    fn segments_sum_to_rectangle() {
        let a = LatticePolytope::from_lattice_points(&[vec![0, 0], vec![3, 0]]).unwrap();
        let b = LatticePolytope::from_lattice_points(&[vec![0, 0], vec![0, 2]]).unwrap();
        let r = minkowski_sum(&a, &b).unwrap();
        assert_eq!(r.scaled_vertices(), &[vec![0, 0], vec![0, 2], vec![3, 0], vec![3, 2]]);
        let pt = LatticePolytope::from_lattice_points(&[vec![1, 1]]).unwrap();
        let moved = minkowski_sum(&a, &pt).unwrap();
        assert_eq!(moved.scaled_vertices(), &[vec![1, 1], vec![4, 1]]);
    }

    #[test]
    fn sum_of_unit_lift_hulls() {
        let (h1, h2) = (2, 3);
        let a1 = LatticePolytope::from_lattice_points(&[vec![0, 0, 0], vec![h1, 0, 0], vec![0, 1, 0]]).unwrap();
        let a2 = LatticePolytope::from_lattice_points(&[vec![0, 0, 0], vec![h2, 0, 0], vec![0, 0, 1]]).unwrap();
        let s = minkowski_sum(&a1, &a2).unwrap();
        let mut expected = vec![
            vec![0, 0, 0],
            vec![0, 1, 0],
            vec![h2, 1, 0],
            vec![h1 + h2, 0, 0],
            vec![h1, 0, 1],
            vec![0, 0, 1],
            vec![0, 1, 1],
        ];
        expected.sort();
        assert_eq!(s.scaled_vertices(), expected.as_slice());
    }

    #[test]
    fn json_round_trip() {
        let p = convex_hull(&[vec![q(0, 1), q(1, 3)], vec![q(2, 1), q(0, 1)], vec![q(1, 1), q(1, 1)]]).unwrap();
        let j = PolytopeJson::from(&p);
        let back = LatticePolytope::try_from(&j).unwrap();
        assert_eq!(back, p);
    }
}
