//! Incremental convex hull of integer points in dimension at most 4.
//!
//! Lower-dimensional inputs are hulled inside their affine span, through a
//! coordinate projection that is injective on that span.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;

pub const MAX_DIM: usize = 4;

/// A facet inequality `normal · x <= offset`, with `normal` primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Debug, Clone)]
pub struct Hull {
    pub dim: usize,
    pub adim: usize,
    /// Extreme points, sorted.
    pub vertices: Vec<Vec<i64>>,
    /// Facets within the affine span, in ambient coordinates; empty for `adim < 2`
    /// except that a segment reports its two endpoint functionals.
    pub facets: Vec<Facet>,
    /// `adim! * volume` measured in the projected coordinates; equals the
    /// lattice volume when `adim == dim`.
    pub scaled_volume: i128,
}

/// Computes the hull; `points` must be nonempty and share one length `<= 4`.
pub fn hull(points: &[Vec<i64>]) -> Hull {
    let dim = points[0].len();
    assert!(dim <= MAX_DIM, "hull dimension {dim} unsupported");
    let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let (base, dirs) = affine_basis(&pts);
    let adim = dirs.len();
    if adim == 0 {
        return Hull { dim, adim, vertices: vec![pts[0].clone()], facets: Vec::new(), scaled_volume: 0 };
    }
    let axes = injective_axes(&dirs, dim);
    let proj: Vec<Vec<i128>> = pts.iter().map(|p| axes.iter().map(|&a| i128::from(p[a])).collect()).collect();

    if adim == 1 {
        let key = |i: &usize| proj[*i][0];
        let lo = (0..pts.len()).min_by_key(key).unwrap();
        let hi = (0..pts.len()).max_by_key(key).unwrap();
        let mut vertices = vec![pts[lo].clone(), pts[hi].clone()];
        vertices.sort();
        let length = proj[hi][0] - proj[lo][0];
        let mut up = vec![0i64; dim];
        up[axes[0]] = 1;
        let mut down = vec![0i64; dim];
        down[axes[0]] = -1;
        let facets = vec![
            Facet { normal: up, offset: i64::try_from(proj[hi][0]).unwrap() },
            Facet { normal: down, offset: i64::try_from(-proj[lo][0]).unwrap() },
        ];
        return Hull { dim, adim, vertices, facets, scaled_volume: length };
    }

    let simplex: Vec<usize> = std::iter::once(base).chain(dirs.iter().map(|d| d.0)).collect();
    let inner = full_hull(&proj, &simplex);
    let mut facets: BTreeSet<Facet> = BTreeSet::new();
    let mut normals_at: HashMap<usize, BTreeSet<Vec<i128>>> = HashMap::new();
    for f in &inner.facets {
        let g = f.normal.iter().fold(0i128, |g, c| g.gcd(c));
        let n: Vec<i128> = f.normal.iter().map(|c| c / g).collect();
        let mut ambient = vec![0i64; dim];
        for (slot, &a) in axes.iter().enumerate() {
            ambient[a] = i64::try_from(n[slot]).expect("facet normal overflow");
        }
        facets.insert(Facet { normal: ambient, offset: i64::try_from(f.offset / g).expect("facet offset overflow") });
        for &v in &f.verts {
            normals_at.entry(v).or_default().insert(n.clone());
        }
    }
    let mut vertices: Vec<Vec<i64>> = normals_at
        .into_iter()
        .filter(|(_, ns)| rank_i128(&ns.iter().cloned().collect::<Vec<_>>()) == adim)
        .map(|(v, _)| pts[v].clone())
        .collect();
    vertices.sort();
    let apex = &proj[inner.facets[0].verts[0]];
    let scaled_volume = inner
        .facets
        .iter()
        .map(|f| {
            let rows: Vec<Vec<i128>> = f
                .verts
                .iter()
                .map(|&v| proj[v].iter().zip(apex).map(|(a, b)| a - b).collect())
                .collect();
            det(&rows).abs()
        })
        .sum();
    Hull { dim, adim, vertices, facets: facets.into_iter().collect(), scaled_volume }
}

/// First point plus a greedy maximal set of affinely independent points,
/// returned as (index, difference vector).
fn affine_basis(pts: &[Vec<i64>]) -> (usize, Vec<(usize, Vec<i128>)>) {
    let base = 0;
    let mut chosen: Vec<(usize, Vec<i128>)> = Vec::new();
    for (i, p) in pts.iter().enumerate().skip(1) {
        let d: Vec<i128> = p.iter().zip(&pts[base]).map(|(a, b)| i128::from(a - b)).collect();
        let mut rows: Vec<Vec<i128>> = chosen.iter().map(|c| c.1.clone()).collect();
        rows.push(d.clone());
        if rank_i128(&rows) == rows.len() {
            chosen.push((i, d));
        }
    }
    (base, chosen)
}

/// Lexicographically first coordinate subset on which the span directions stay independent.
fn injective_axes(dirs: &[(usize, Vec<i128>)], dim: usize) -> Vec<usize> {
    let k = dirs.len();
    for mask in 0u32..(1 << dim) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let axes: Vec<usize> = (0..dim).filter(|a| mask & (1 << a) != 0).collect();
        let minor: Vec<Vec<i128>> = dirs.iter().map(|(_, d)| axes.iter().map(|&a| d[a]).collect()).collect();
        if det(&minor) != 0 {
            return axes;
        }
    }
    unreachable!("independent directions always admit a nonzero maximal minor")
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn rank_i128(rows: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in r + 1..m {
            if a[i][c] != 0 {
                let (num, den) = (a[i][c], a[r][c]);
                let g = num.gcd(&den);
                let (num, den) = (num / g, den / g);
                let (top, bottom) = a.split_at_mut(i);
                for (x, y) in bottom[0][c..].iter_mut().zip(&top[r][c..]) {
                    *x = *x * den - y * num;
                }
                let rg = a[i].iter().fold(0i128, |g, x| g.gcd(x));
                if rg > 1 {
                    a[i].iter_mut().for_each(|x| *x /= rg);
                }
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    r
}

/// Determinant of a square integer matrix (Bareiss).
pub fn det(rows: &[Vec<i128>]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .expect("determinant overflow");
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

struct SimplexFacet {
    verts: Vec<usize>,
    normal: Vec<i128>,
    offset: i128,
}

struct FullHull {
    facets: Vec<SimplexFacet>,
}

/// Beneath-beyond hull of full-dimensional points in `Z^k`, `2 <= k <= 4`.
fn full_hull(pts: &[Vec<i128>], simplex: &[usize]) -> FullHull {
    let k = pts[0].len();
    // Interior reference scaled by k + 1 to stay integral.
    let centre: Vec<i128> = (0..k).map(|c| simplex.iter().map(|&i| pts[i][c]).sum()).collect();
    let scale = (k + 1) as i128;

    let make = |verts: Vec<usize>| -> SimplexFacet {
        let origin = &pts[verts[0]];
        let edges: Vec<Vec<i128>> = verts[1..]
            .iter()
            .map(|&v| pts[v].iter().zip(origin).map(|(a, b)| a - b).collect())
            .collect();
        let mut normal: Vec<i128> = (0..k)
            .map(|c| {
                let minor: Vec<Vec<i128>> =
                    edges.iter().map(|e| (0..k).filter(|&j| j != c).map(|j| e[j]).collect()).collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * det(&minor)
            })
            .collect();
        let mut offset: i128 = normal.iter().zip(origin).map(|(a, b)| a * b).sum();
        let inside: i128 = normal.iter().zip(&centre).map(|(a, b)| a * b).sum();
        if inside > offset * scale {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        SimplexFacet { verts, normal, offset }
    };

    let mut facets: Vec<SimplexFacet> = (0..=k)
        .map(|skip| simplex.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect())
        .map(make)
        .collect();

    for (p, point) in pts.iter().enumerate() {
        if simplex.contains(&p) {
            continue;
        }
        let above = |f: &SimplexFacet| f.normal.iter().zip(point).map(|(a, b)| a * b).sum::<i128>() > f.offset;
        if !facets.iter().any(above) {
            continue;
        }
        let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for f in facets.iter().filter(|f| above(f)) {
            for skip in 0..f.verts.len() {
                let mut ridge: Vec<usize> =
                    f.verts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
                ridge.sort_unstable();
                *ridges.entry(ridge).or_default() += 1;
            }
        }
        facets.retain(|f| !above(f));
        for (ridge, count) in ridges {
            if count == 1 {
                let mut verts = ridge;
                verts.push(p);
                facets.push(make(verts));
            }
        }
    }
    FullHull { facets }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_centre_and_edge_points() {
        let pts = vec![vec![1, 1], vec![1, 0], vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![2, 1]];
        let h = hull(&pts);
        assert_eq!(h.adim, 2);
        assert_eq!(h.vertices, vec![vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2]]);
        assert_eq!(h.facets.len(), 4);
        assert_eq!(h.scaled_volume, 8);
    }

    #[test]
    fn collinear_points_in_space() {
        let h = hull(&[vec![0, 0, 0], vec![2, 2, 2], vec![1, 1, 1]]);
        assert_eq!(h.adim, 1);
        assert_eq!(h.vertices, vec![vec![0, 0, 0], vec![2, 2, 2]]);
    }

    #[test]
    fn planar_points_in_space() {
        let h = hull(&[vec![0, 0, 0], vec![2, 0, 0], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(h.adim, 2);
        assert_eq!(h.vertices.len(), 3);
        assert_eq!(h.scaled_volume, 2);
    }

    #[test]
    fn four_simplex() {
        let mut pts = vec![vec![0; 4]];
        for i in 0..4 {
            let mut e = vec![0; 4];
            e[i] = 1;
            pts.push(e);
        }
        pts.push(vec![0, 0, 1, 0]);
        let h = hull(&pts);
        assert_eq!(h.adim, 4);
        assert_eq!(h.vertices.len(), 5);
        assert_eq!(h.facets.len(), 5);
        assert_eq!(h.scaled_volume, 1);
    }

    #[test]
    fn cube_volume() {
        let pts: Vec<Vec<i64>> = (0..8).map(|m| (0..3).map(|i| (m >> i) & 1).collect()).collect();
        let h = hull(&pts);
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.facets.len(), 6);
        assert_eq!(h.scaled_volume, 6);
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(det(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), 6);
        assert_eq!(det(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]), 0);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), -1);
    }
}
