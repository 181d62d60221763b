//! Lattice-normalized mixed volumes, normalized so that `MV(P, ..., P) = d! vol(P)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::hull::{self, MAX_DIM};
use super::polytope::{to_u64, LatticePolytope};
use super::GeomError;
use crate::lattice::hnf;
use crate::Rational;

/// Mixed volume of `d` polytopes in `Q^d`, as an exact rational.
pub fn mixed_volume_rational(ps: &[LatticePolytope]) -> Result<Rational, GeomError> {
    let d = ps.len();
    if d == 0 {
        return Err(GeomError::Empty);
    }
    if d > MAX_DIM {
        return Err(GeomError::DimensionUnsupported(d));
    }
    if ps.iter().any(|p| p.dim() != d) {
        return Err(GeomError::DimensionMismatch);
    }
    let den = ps.iter().fold(1i64, |l, p| l.lcm(&p.denominator()));
    let scaled: Vec<Vec<Vec<i64>>> = ps.iter().map(|p| p.rescaled_vertices(den)).collect();

    // Vertex sets of every partial Minkowski sum, built up by lowest set bit.
    let full = 1usize << d;
    let mut sums: Vec<Vec<Vec<i64>>> = vec![vec![vec![0; d]]; full];
    let mut total = BigInt::zero();
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let pts: Vec<Vec<i64>> = sums[rest]
            .iter()
            .flat_map(|a| scaled[low].iter().map(move |v| a.iter().zip(v).map(|(x, y)| x + y).collect()))
            .collect();
        let h = hull::hull(&pts);
        if h.adim == d {
            let sign = if (d - mask.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 };
            total += BigInt::from(sign * h.scaled_volume);
        }
        sums[mask] = h.vertices;
    }
    let fact: i64 = (1..=d as i64).product();
    Ok(Rational::new(total, BigInt::from(fact) * BigInt::from(den).pow(d as u32)))
}

/// Mixed volume of `d` polytopes in `Q^d`; must be a nonnegative integer.
pub fn mixed_volume(ps: &[LatticePolytope]) -> Result<u64, GeomError> {
    to_u64(&mixed_volume_rational(ps)?)
}

/// Mixed volume of `k` polytopes in `Q^d` that translate into one common
/// `k`-dimensional rational subspace, measured in that subspace's lattice.
pub fn sublattice_mixed_volume(ps: &[LatticePolytope]) -> Result<u64, GeomError> {
    to_u64(&sublattice_mixed_volume_rational(ps)?)
}

pub fn sublattice_mixed_volume_rational(ps: &[LatticePolytope]) -> Result<Rational, GeomError> {
    let k = ps.len();
    let first = ps.first().ok_or(GeomError::Empty)?;
    let d = first.dim();
    if ps.iter().any(|p| p.dim() != d) {
        return Err(GeomError::DimensionMismatch);
    }
    let diffs: Vec<Vec<i128>> = ps
        .iter()
        .flat_map(|p| {
            let v = p.scaled_vertices();
            v[1..]
                .iter()
                .map(|w| w.iter().zip(&v[0]).map(|(a, b)| i128::from(a - b)).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        })
        .collect();
    let r = hull::rank_i128(&diffs);
    if r > k {
        return Err(GeomError::NotCoplanar { needed: k, found: r });
    }
    if r < k {
        return Ok(Rational::zero());
    }
    if k == d {
        return mixed_volume_rational(ps);
    }
    let basis = hnf::saturation(&diffs, d);
    debug_assert_eq!(basis.len(), k);
    let coords = Coordinates::new(&basis);
    let mapped = ps
        .iter()
        .map(|p| {
            let v = p.vertices();
            let pts: Vec<Vec<Rational>> = v
                .iter()
                .map(|w| {
                    let diff: Vec<Rational> = w.iter().zip(&v[0]).map(|(a, b)| a - b).collect();
                    coords.solve(&diff)
                })
                .collect();
            LatticePolytope::from_rational_points(&pts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    mixed_volume_rational(&mapped)
}

/// Coordinates with respect to a lattice basis of a subspace, via a nonsingular
/// square minor.
struct Coordinates {
    columns: Vec<usize>,
    inverse: Vec<Vec<Rational>>,
}

impl Coordinates {
    fn new(basis: &[Vec<i128>]) -> Self {
        let k = basis.len();
        let d = basis[0].len();
        let columns = (0u32..1 << d)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..d).filter(|c| m & (1 << c) != 0).collect::<Vec<_>>())
            .find(|cols| {
                let minor: Vec<Vec<i128>> = basis.iter().map(|b| cols.iter().map(|&c| b[c]).collect()).collect();
                hull::det(&minor) != 0
            })
            .expect("basis has full rank");
        // Solve c * M = x on the chosen columns, where M rows are basis vectors.
        let m: Vec<Vec<Rational>> = basis
            .iter()
            .map(|b| columns.iter().map(|&c| Rational::from_integer(BigInt::from(b[c]))).collect())
            .collect();
        Coordinates { columns, inverse: invert(&m) }
    }

    fn solve(&self, x: &[Rational]) -> Vec<Rational> {
        let xs: Vec<&Rational> = self.columns.iter().map(|&c| &x[c]).collect();
        let k = self.inverse.len();
        // c = xs * M^{-1}
        (0..k)
            .map(|j| (0..k).map(|i| xs[i] * &self.inverse[i][j]).fold(Rational::zero(), |a, b| a + b))
            .collect()
    }
}

pub(crate) fn invert(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("matrix is invertible");
        a.swap(c, p);
        let piv = a[c][c].clone();
        a[c].iter_mut().for_each(|x| *x = &*x / &piv);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let src = a[c].clone();
                a[r].iter_mut().zip(&src).for_each(|(x, y)| *x = &*x - &f * y);
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::polytope::lattice_volume;

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_lattice_points(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn unit_segments() {
        assert_eq!(mixed_volume(&[poly(&[&[0, 0], &[1, 0]]), poly(&[&[0, 0], &[0, 1]])]).unwrap(), 1);
    }

    #[test]
    fn mixed_volume_of_copies_is_volume() {
        let t = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(mixed_volume(&[t.clone(), t]).unwrap(), 1);
        let s = poly(&[&[0, 0, 0], &[2, 0, 0], &[0, 3, 0], &[0, 0, 1], &[1, 1, 1]]);
        let vol = lattice_volume(&s).unwrap();
        assert_eq!(Rational::from_integer(mixed_volume(&[s.clone(), s.clone(), s]).unwrap().into()), vol);
    }

    #[test]
    fn sublattice_segments_in_space() {
        let u = poly(&[&[0, 0, 0], &[1, 1, 0]]);
        let v = poly(&[&[5, 5, 5], &[5, 6, 6]]);
        // basis of the plane: (1,1,0),(0,1,1)
        assert_eq!(sublattice_mixed_volume(&[u.clone(), v]).unwrap(), 1);
        let w = poly(&[&[0, 0, 0], &[3, 3, 0]]);
        assert_eq!(sublattice_mixed_volume(&[w, poly(&[&[0, 0, 0], &[0, 2, 2]])]).unwrap(), 6);
        let pt = poly(&[&[1, 2, 3]]);
        assert_eq!(sublattice_mixed_volume(&[u, pt]).unwrap(), 0);
    }

    #[test]
    fn sublattice_rejects_non_coplanar() {
        let a = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let b = poly(&[&[0, 0, 0], &[0, 0, 1]]);
        assert!(matches!(
            sublattice_mixed_volume(&[a, b]),
            Err(GeomError::NotCoplanar { needed: 2, found: 3 })
        ));
    }
}
