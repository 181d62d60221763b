//! Rational polygons in the plane, possibly degenerate, with exact Minkowski
//! arithmetic in edge-sequence form.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::polytope::{rational_pair, LatticePolytope, PolytopeJson};
use super::GeomError;
use crate::Rational;

pub type Point = [Rational; 2];

/// A convex polygon, a segment or a point. Vertices run counterclockwise from
/// the lowest-then-leftmost vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

/// One boundary edge: a primitive integer direction and its lattice length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub direction: [i64; 2],
    pub length: Rational,
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

fn lower_left(a: &Point, b: &Point) -> Ordering {
    a[1].cmp(&b[1]).then_with(|| a[0].cmp(&b[0]))
}

/// Counterclockwise angle order of directions, starting at the positive x-axis.
fn angle_cmp(a: &[i64; 2], b: &[i64; 2]) -> Ordering {
    let half = |d: &[i64; 2]| u8::from(!(d[1] > 0 || (d[1] == 0 && d[0] > 0)));
    half(a).cmp(&half(b)).then_with(|| {
        let c = i128::from(a[0]) * i128::from(b[1]) - i128::from(a[1]) * i128::from(b[0]);
        0.cmp(&c)
    })
}

impl Polygon {
    pub fn point(p: Point) -> Self {
        Polygon { vertices: vec![p] }
    }

    pub fn origin() -> Self {
        Polygon::point([Rational::zero(), Rational::zero()])
    }

    /// Convex hull of rational points (monotone chain).
    pub fn hull(points: &[Point]) -> Result<Self, GeomError> {
        if points.is_empty() {
            return Err(GeomError::Empty);
        }
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort_by(|a, b| a[0].cmp(&b[0]).then_with(|| a[1].cmp(&b[1])));
        pts.dedup();
        if pts.len() <= 2 {
            return Ok(Polygon::from_ccw(pts));
        }
        let mut lower: Vec<Point> = Vec::new();
        for p in &pts {
            while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Ok(Polygon::from_ccw(lower))
    }

    fn from_ccw(mut vertices: Vec<Point>) -> Self {
        if let Some(start) = (0..vertices.len()).min_by(|&i, &j| lower_left(&vertices[i], &vertices[j])) {
            vertices.rotate_left(start);
        }
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Affine dimension: 0, 1 or 2.
    pub fn adim(&self) -> usize {
        self.vertices.len().min(3) - 1
    }

    /// Boundary edges counterclockwise; a segment yields two opposite edges.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.vertices.len();
        if n == 1 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let a = &self.vertices[i];
                let b = &self.vertices[(i + 1) % n];
                primitive_edge(&(&b[0] - &a[0]), &(&b[1] - &a[1]))
            })
            .collect()
    }

    /// Rebuilds a polygon from a start vertex and counterclockwise edges.
    pub fn from_edges(start: Point, edges: &[Edge]) -> Result<Self, GeomError> {
        let mut pts = vec![start];
        for e in edges {
            let last = pts.last().unwrap();
            let next = [
                &last[0] + &e.length * Rational::from_integer(e.direction[0].into()),
                &last[1] + &e.length * Rational::from_integer(e.direction[1].into()),
            ];
            pts.push(next);
        }
        let end = pts.pop().unwrap();
        if end != pts[0] {
            return Err(GeomError::NotASummand("edge sequence does not close".into()));
        }
        Polygon::hull(&pts)
    }

    pub fn scale(&self, factor: &Rational) -> Polygon {
        assert!(!factor.is_negative());
        if factor.is_zero() {
            return Polygon::origin();
        }
        Polygon::from_ccw(self.vertices.iter().map(|v| [&v[0] * factor, &v[1] * factor]).collect())
    }

    pub fn translate(&self, by: &Point) -> Polygon {
        Polygon::from_ccw(self.vertices.iter().map(|v| [&v[0] + &by[0], &v[1] + &by[1]]).collect())
    }

    pub fn minkowski_sum(&self, other: &Polygon) -> Polygon {
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| [&a[0] + &b[0], &a[1] + &b[1]]))
            .collect();
        Polygon::hull(&pts).expect("nonempty")
    }

    /// The polygon `R` with `R + other = self`, if it exists.
    pub fn minkowski_difference(&self, other: &Polygon) -> Result<Polygon, GeomError> {
        let mut merged: Vec<Edge> = self.edges();
        for e in other.edges() {
            match merged.iter_mut().find(|m| m.direction == e.direction) {
                Some(m) => m.length = &m.length - &e.length,
                None => {
                    return Err(GeomError::NotASummand(format!(
                        "direction {:?} of the subtrahend is missing from the minuend",
                        e.direction
                    )))
                }
            }
        }
        if let Some(bad) = merged.iter().find(|m| m.length.is_negative()) {
            return Err(GeomError::NotASummand(format!(
                "edge {:?} would get negative length {}",
                bad.direction, bad.length
            )));
        }
        merged.retain(|m| !m.length.is_zero());
        merged.sort_by(|a, b| angle_cmp(&a.direction, &b.direction));
        let start = [&self.vertices[0][0] - &other.vertices[0][0], &self.vertices[0][1] - &other.vertices[0][1]];
        let r = Polygon::from_edges(start, &merged)?;
        debug_assert_eq!(&r.minkowski_sum(other), self);
        Ok(r)
    }

    /// Twice the Euclidean area.
    pub fn lattice_area(&self) -> Rational {
        let n = self.vertices.len();
        if n < 3 {
            return Rational::zero();
        }
        (0..n)
            .map(|i| {
                let a = &self.vertices[i];
                let b = &self.vertices[(i + 1) % n];
                &a[0] * &b[1] - &a[1] * &b[0]
            })
            .fold(Rational::zero(), |s, x| s + x)
            .abs()
    }

    /// Shift so each coordinate has minimum 0.
    pub fn normalized(&self) -> Polygon {
        let mx = self.vertices.iter().map(|v| v[0].clone()).min().unwrap();
        let my = self.vertices.iter().map(|v| v[1].clone()).min().unwrap();
        self.translate(&[-mx, -my])
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().flatten().all(Rational::is_integer)
    }

    pub fn to_polytope(&self) -> Result<LatticePolytope, GeomError> {
        let pts: Vec<Vec<Rational>> = self.vertices.iter().map(|v| v.to_vec()).collect();
        LatticePolytope::from_rational_points(&pts)
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson { vertices: self.vertices.iter().map(|v| v.iter().map(rational_pair).collect()).collect() }
    }
}

/// Mixed area `MV(P, Q)` with `MV(P, P) = lattice_area(P)`.
pub fn mixed_area(p: &Polygon, q: &Polygon) -> Rational {
    let s = p.minkowski_sum(q);
    (s.lattice_area() - p.lattice_area() - q.lattice_area()) / Rational::from_integer(2.into())
}

fn primitive_edge(dx: &Rational, dy: &Rational) -> Edge {
    // lcm of denominators clears fractions; gcd of numerators gives the lattice length.
    let l = dx.denom().lcm(dy.denom());
    let nx = (dx * Rational::from_integer(l.clone())).to_integer();
    let ny = (dy * Rational::from_integer(l.clone())).to_integer();
    let g = nx.gcd(&ny);
    let direction = [
        (&nx / &g).to_i64().expect("edge direction fits in i64"),
        (&ny / &g).to_i64().expect("edge direction fits in i64"),
    ];
    Edge { direction, length: Rational::new(g, l) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        [Rational::from_integer(x.into()), Rational::from_integer(y.into())]
    }

    fn poly(pts: &[(i64, i64)]) -> Polygon {
        Polygon::hull(&pts.iter().map(|&(x, y)| pt(x, y)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hull_and_area() {
        let sq = poly(&[(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0)]);
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.lattice_area(), Rational::from_integer(8.into()));
    }

    #[test]
    fn difference_inverts_sum() {
        let t = poly(&[(0, 0), (3, 0), (0, 2)]);
        let s = poly(&[(0, 0), (1, 1)]);
        let sum = t.minkowski_sum(&s);
        assert_eq!(sum.minkowski_difference(&s).unwrap().normalized(), t.normalized());
        assert_eq!(sum.minkowski_difference(&t).unwrap().normalized(), s.normalized());
    }

    #[test]
    fn difference_rejects_non_summand() {
        let t = poly(&[(0, 0), (3, 0), (0, 2)]);
        let s = poly(&[(0, 0), (0, 3)]);
        assert!(matches!(t.minkowski_difference(&s), Err(GeomError::NotASummand(_))));
    }

    #[test]
    fn mixed_area_examples() {
        let t = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(mixed_area(&t, &t), Rational::from_integer(1.into()));
        let e1 = poly(&[(0, 0), (1, 0)]);
        let e2 = poly(&[(0, 0), (0, 1)]);
        assert_eq!(mixed_area(&e1, &e2), Rational::from_integer(1.into()));
    }

    #[test]
    fn angle_order_is_counterclockwise() {
        let mut dirs = vec![[0, -1], [-1, 0], [1, 1], [1, 0], [-1, -1], [0, 1], [1, -2]];
        dirs.sort_by(angle_cmp);
        assert_eq!(dirs, vec![[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1], [1, -2]]);
    }
}
