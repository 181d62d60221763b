//! Fiber polygons over a one-dimensional base, and the mixed fiber polygon.

use num_traits::Zero;

use super::polygon::{Point, Polygon};
use super::polytope::{minkowski_sum, LatticePolytope};
use super::GeomError;
use crate::Rational;

/// The slice `P ∩ {x_base = t}`, in the remaining two coordinates.
fn slice(verts: &[Vec<Rational>], base: usize, t: &Rational) -> Result<Polygon, GeomError> {
    let rest: Vec<usize> = (0..3).filter(|&c| c != base).collect();
    let pick = |p: &[Rational]| -> Point { [p[rest[0]].clone(), p[rest[1]].clone()] };
    let mut pts: Vec<Point> = verts.iter().filter(|v| &v[base] == t).map(|v| pick(v)).collect();
    for v in verts.iter().filter(|v| &v[base] < t) {
        for w in verts.iter().filter(|w| &w[base] > t) {
            let lam = (t - &v[base]) / (&w[base] - &v[base]);
            let p: Vec<Rational> = v.iter().zip(w).map(|(a, b)| a + &lam * (b - a)).collect();
            pts.push(pick(&p));
        }
    }
    Polygon::hull(&pts)
}

/// Minkowski integral of the fibers of `P ⊂ Q^3` over the `base` coordinate.
///
/// Between consecutive vertex heights the fiber interpolates linearly in the
/// Minkowski sense, so each chamber of width `w` contributes `w/2 (F_lo + F_hi)`.
/// A polytope with a single base height integrates to the origin.
pub fn fiber_polygon(p: &LatticePolytope, base: usize) -> Result<Polygon, GeomError> {
    if p.dim() != 3 || base >= 3 {
        return Err(GeomError::DimensionMismatch);
    }
    let verts = p.vertices();
    let mut heights: Vec<Rational> = verts.iter().map(|v| v[base].clone()).collect();
    heights.sort();
    heights.dedup();
    let fibers = heights.iter().map(|t| slice(&verts, base, t)).collect::<Result<Vec<_>, _>>()?;
    let half = Rational::new(1.into(), 2.into());
    let mut acc = Polygon::origin();
    for i in 1..heights.len() {
        let w = (&heights[i] - &heights[i - 1]) * &half;
        let chamber = fibers[i - 1].minkowski_sum(&fibers[i]).scale(&w);
        acc = acc.minkowski_sum(&chamber);
    }
    Ok(acc)
}

/// `Fib(P + Q) ⊖ Fib(P) ⊖ Fib(Q)`, shifted so both coordinate minima are 0.
pub fn mixed_fiber_polygon(p: &LatticePolytope, q: &LatticePolytope, base: usize) -> Result<Polygon, GeomError> {
    let sum = minkowski_sum(p, q)?;
    let whole = fiber_polygon(&sum, base)?;
    let r = whole.minkowski_difference(&fiber_polygon(p, base)?)?;
    let r = r.minkowski_difference(&fiber_polygon(q, base)?)?;
    Ok(r.normalized())
}

/// `true` when the polygon is a single point at the origin after normalization.
pub fn is_trivial(p: &Polygon) -> bool {
    p.vertices().len() == 1 && p.vertices()[0].iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn poly(pts: &[[i64; 3]]) -> LatticePolytope {
        LatticePolytope::from_lattice_points(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn triangle_fiber_is_half_segment() {
        let h1 = 5;
        let f = fiber_polygon(&poly(&[[0, 0, 0], [h1, 0, 0], [0, 1, 0]]), 0).unwrap();
        assert_eq!(f.vertices(), &[[int(0), int(0)], [Rational::new(5.into(), 2.into()), int(0)]]);
    }

    #[test]
    fn prism_fiber_scales_with_width() {
        let w = 3;
        let f = fiber_polygon(
            &poly(&[[0, 0, 0], [0, 1, 0], [0, 0, 1], [w, 0, 0], [w, 1, 0], [w, 0, 1]]),
            0,
        )
        .unwrap();
        assert_eq!(f.lattice_area(), int(w * w));
        assert_eq!(f.vertices().len(), 3);
    }

    #[test]
    fn point_integrates_to_origin() {
        assert!(is_trivial(&fiber_polygon(&poly(&[[1, 2, 3]]), 0).unwrap()));
    }

    #[test]
    fn unit_lift_mixed_fiber_polygon() {
        for (h1, h2) in [(2, 3), (3, 4), (4, 7)] {
            let a1 = poly(&[[0, 0, 0], [h1, 0, 0], [0, 1, 0]]);
            let a2 = poly(&[[0, 0, 0], [h2, 0, 0], [0, 0, 1]]);
            let m = mixed_fiber_polygon(&a1, &a2, 0).unwrap();
            let expected = Polygon::hull(&[[int(0), int(0)], [int(0), int(h1)], [int(h2), int(0)]]).unwrap();
            assert_eq!(m, expected, "h = ({h1}, {h2})");
        }
    }
}
