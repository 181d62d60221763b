//! Singularities of the plane curve obtained by projecting a generic sparse
//! spatial curve `{g_1 = g_2 = 0} ⊂ (C*)^3` along its first coordinate.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::delta::DeltaError;
use crate::geom::{mixed_fiber_polygon, mixed_volume, minkowski_sum, GeomError, LatticePolytope, PolytopeJson};
use crate::lattice::SupportSet;
use crate::strata::{
    check_exceptional, find_m_decompositions, normalize_supports, SingularityKind, StrataError, StratumName,
};
use crate::ultratrop::{thsum_report, ThsumReport, UltratropError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Ultratrop(#[from] UltratropError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error("supports must lie in Z^3")]
    NotSpatial,
    #[error("conv(A_1) + conv(A_2) has dimension {0}, expected 3")]
    Degenerate(usize),
    #[error("clause {clause}: mixed volume {value} is not divisible by {divisor}")]
    NonIntegralCount { clause: u8, value: u64, divisor: u64 },
    #[error("node count {total} - {non_node} is negative")]
    NegativeNodeCount { total: u64, non_node: u64 },
}

/// Images `B_i` of the supports under the first coordinate, with each fiber
/// `A_i^b` written in the remaining two coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub b: [SupportSet; 2],
    pub fibers: [BTreeMap<i64, SupportSet>; 2],
}

impl Projection {
    pub fn fiber(&self, i: usize, b: i64) -> &SupportSet {
        &self.fibers[i][&b]
    }
}

pub fn project_supports(a1: &SupportSet, a2: &SupportSet) -> Result<Projection, CensusError> {
    let project = |a: &SupportSet| {
        let mut by_height: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
        for p in a.points() {
            by_height.entry(p[0]).or_default().push(p[1..].to_vec());
        }
        let b = SupportSet::collect(1, by_height.keys().map(|&h| vec![h])).expect("nonempty");
        let fibers = by_height
            .into_iter()
            .map(|(h, pts)| (h, SupportSet::collect(2, pts).expect("nonempty fiber")))
            .collect();
        (b, fibers)
    };
    if a1.dim() != 3 || a2.dim() != 3 {
        return Err(CensusError::NotSpatial);
    }
    let ((b1, f1), (b2, f2)) = (project(a1), project(a2));
    Ok(Projection { b: [b1, b2], fibers: [f1, f2] })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub kind: SingularityKind,
    pub count: u64,
    pub delta_each: u64,
    /// Which case of the classification produced the entry, 1 to 5.
    pub clause: u8,
    /// The resultant stratum whose generic transversal slice has this type.
    pub stratum: StratumName,
}

fn polytope_json<S: Serializer>(p: &LatticePolytope, s: S) -> Result<S::Ok, S::Error> {
    PolytopeJson::from(p).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityCensus {
    pub entries: Vec<CensusEntry>,
    pub nodes: u64,
    pub total_delta: u64,
    #[serde(serialize_with = "polytope_json")]
    pub newton_polygon: LatticePolytope,
    /// Reading choices that affected the result.
    pub flags: Vec<String>,
}

impl SingularityCensus {
    pub fn non_node_delta(&self) -> u64 {
        self.entries.iter().map(|e| e.count * e.delta_each).sum()
    }
}

fn hull(points: &[Vec<i64>]) -> Result<LatticePolytope, GeomError> {
    LatticePolytope::from_lattice_points(points)
}

/// The mixed fiber polygon of the two hulls over the first coordinate.
pub fn newton_polygon_of_projection(a1: &SupportSet, a2: &SupportSet) -> Result<LatticePolytope, CensusError> {
    let (p1, p2) = (hull(a1.points())?, hull(a2.points())?);
    Ok(mixed_fiber_polygon(&p1, &p2, 0)?.to_polytope()?)
}

pub fn total_delta(a1: &SupportSet, a2: &SupportSet) -> Result<u64, CensusError> {
    Ok(thsum_report(a1, a2)?.total)
}

fn lifted(fiber: &SupportSet, level: i64) -> impl Iterator<Item = Vec<i64>> + '_ {
    fiber.points().iter().map(move |p| vec![p[0], p[1], level])
}

/// Census of the projected curve, with the total δ taken from the
/// mixed-volume formula and the nodes as the remainder.
pub fn census(a1: &SupportSet, a2: &SupportSet) -> Result<SingularityCensus, CensusError> {
    Ok(census_with_report(a1, a2)?.0)
}

pub fn census_with_report(a1: &SupportSet, a2: &SupportSet) -> Result<(SingularityCensus, ThsumReport), CensusError> {
    let proj = project_supports(a1, a2)?;
    let sum = minkowski_sum(&hull(a1.points())?, &hull(a2.points())?)?;
    if sum.adim() != 3 {
        return Err(CensusError::Degenerate(sum.adim()));
    }
    let (n1, n2, norm) = normalize_supports(&proj.b[0], &proj.b[1])?;
    check_exceptional(&n1, &n2)?;
    let report = thsum_report(a1, a2)?;
    let raw = |i: usize, v: i64| norm.shifts[i] + v * norm.scale as i64;
    let normalized = [&n1, &n2];
    let len = |b: &SupportSet| {
        let v = b.values();
        (v[v.len() - 1] - v[0]) as u64
    };
    let mut entries = Vec::new();
    let mut flags = Vec::new();
    let mut push = |kind: SingularityKind, count: u64, clause: u8, stratum: StratumName| -> Result<(), CensusError> {
        let delta_each = kind.delta()?;
        entries.push(CensusEntry { kind, count, delta_each, clause, stratum });
        Ok(())
    };

    for d in find_m_decompositions(&n1, &n2)? {
        let j = d.set - 1;
        let a = [a1, a2];
        let part = |p: &SupportSet| -> Vec<Vec<i64>> {
            let heights: Vec<i64> = p.values().into_iter().map(|v| raw(j, v)).collect();
            a[j].points().iter().filter(|q| heights.contains(&q[0])).cloned().collect()
        };
        let mv = mixed_volume(&[hull(a[1 - j].points())?, hull(&part(&d.parts[0]))?, hull(&part(&d.parts[1]))?])?;
        if mv % d.m != 0 {
            return Err(CensusError::NonIntegralCount { clause: 1, value: mv, divisor: d.m });
        }
        flags.push(format!(
            "clause 1 splits B_{} (|B_{}| > 2) and pairs its parts with the other equation",
            d.set, d.set
        ));
        push(SingularityKind::Ordinary(d.m), mv / d.m, 1, StratumName::Sm(d.m))?;
    }

    for (i, name) in [(0usize, StratumName::T1), (1, StratumName::T2)] {
        let other = len(normalized[1 - i]);
        if normalized[i].len() == 2 && other > 1 {
            let v = proj.b[i].values();
            let mv = mixed_volume(&[hull(proj.fiber(i, v[0]).points())?, hull(proj.fiber(i, v[1]).points())?])?;
            push(SingularityKind::Ordinary(other), mv, 2, name)?;
        }
    }

    let unit_gap = |bs: [&SupportSet; 2]| bs.iter().any(|b| b.contains(&[b.values()[0] + 1]));
    if !unit_gap(normalized) {
        let (lo1, lo2) = (proj.b[0].values()[0], proj.b[1].values()[0]);
        let mv = mixed_volume(&[hull(proj.fiber(0, lo1).points())?, hull(proj.fiber(1, lo2).points())?])?;
        push(SingularityKind::Sparse(n1.clone(), n2.clone()), mv, 3, StratumName::S0)?;
    }
    let mirror = |b: &SupportSet| {
        let top = *b.values().last().unwrap();
        SupportSet::collect(1, b.values().into_iter().map(|v| vec![top - v])).expect("nonempty")
    };
    let (m1, m2) = (mirror(&n1), mirror(&n2));
    if !unit_gap([&m1, &m2]) {
        let (hi1, hi2) = (*proj.b[0].values().last().unwrap(), *proj.b[1].values().last().unwrap());
        let mv = mixed_volume(&[hull(proj.fiber(0, hi1).points())?, hull(proj.fiber(1, hi2).points())?])?;
        push(SingularityKind::Sparse(m1, m2), mv, 4, StratumName::SInf)?;
    }

    if n1.len() == 3 && n1 == n2 {
        let shift = proj.b[1].values()[0] - proj.b[0].values()[0];
        let sets = proj.b[0]
            .values()
            .into_iter()
            .map(|b| {
                let pts: Vec<Vec<i64>> =
                    lifted(proj.fiber(0, b), 0).chain(lifted(proj.fiber(1, b + shift), 1)).collect();
                hull(&pts)
            })
            .collect::<Result<Vec<_>, _>>()?;
        push(SingularityKind::Ordinary(len(&n1)), mixed_volume(&sets)?, 5, StratumName::T0)?;
    }

    let non_node: u64 = entries.iter().map(|e| e.count * e.delta_each).sum();
    let total = report.total;
    if non_node > total {
        return Err(CensusError::NegativeNodeCount { total, non_node });
    }
    let census = SingularityCensus {
        entries,
        nodes: total - non_node,
        total_delta: total,
        newton_polygon: newton_polygon_of_projection(a1, a2)?,
        flags,
    };
    Ok((census, report))
}

/// `B × Δ` for the standard triangle `Δ` in the last two coordinates.
pub fn times_standard_triangle(b: &SupportSet) -> SupportSet {
    let pts = b.values().into_iter().flat_map(|v| [vec![v, 0, 0], vec![v, 1, 0], vec![v, 0, 1]]);
    SupportSet::collect(3, pts).expect("nonempty")
}

/// Census of the curve with supports `B_i × Δ`.
pub fn standard_triangle_census(b1: &SupportSet, b2: &SupportSet) -> Result<SingularityCensus, CensusError> {
    census(&times_standard_triangle(b1), &times_standard_triangle(b2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ultratrop::lift_with_unit;

    fn s(v: &[i64]) -> SupportSet {
        SupportSet::from_ints(v).unwrap()
    }

    fn plane(points: &[[i64; 2]]) -> SupportSet {
        SupportSet::new(2, points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn unit_lift(b1: &[i64], b2: &[i64]) -> (SupportSet, SupportSet) {
        (lift_with_unit(&s(b1), 0), lift_with_unit(&s(b2), 1))
    }

    #[test]
    fn unit_lift_fibers() {
        let (a1, a2) = unit_lift(&[0, 2], &[0, 3]);
        let p = project_supports(&a1, &a2).unwrap();
        assert_eq!(p.b[0], s(&[0, 2]));
        assert_eq!(p.fiber(0, 0), &plane(&[[0, 0], [1, 0]]));
        assert_eq!(p.fiber(0, 2), &plane(&[[0, 0]]));
        assert_eq!(p.fiber(1, 0), &plane(&[[0, 0], [0, 1]]));
        assert_eq!(p.fiber(1, 3), &plane(&[[0, 0]]));
    }

    #[test]
    fn cusp_census() {
        let (a1, a2) = unit_lift(&[0, 2], &[0, 3]);
        let c = census(&a1, &a2).unwrap();
        let clauses: Vec<(u8, u64)> = c.entries.iter().map(|e| (e.clause, e.count)).collect();
        assert_eq!(clauses, vec![(2, 0), (2, 0), (3, 1), (4, 0)]);
        let s0 = &c.entries[2];
        assert_eq!(s0.delta_each, 1);
        assert_eq!(s0.kind, SingularityKind::Sparse(s(&[0, 2]), s(&[0, 3])));
        assert_eq!((c.nodes, c.total_delta), (0, 1));
    }

    #[test]
    fn a4_census() {
        let (a1, a2) = unit_lift(&[0, 2], &[0, 5]);
        let c = census(&a1, &a2).unwrap();
        let s0 = c.entries.iter().find(|e| e.clause == 3).unwrap();
        assert_eq!((s0.count, s0.delta_each, c.nodes), (1, 2, 0));
    }

    #[test]
    fn newton_polygon_is_the_triangle() {
        for (h1, h2) in [(2, 3), (4, 7)] {
            let (a1, a2) = unit_lift(&[0, h1], &[0, h2]);
            let p = newton_polygon_of_projection(&a1, &a2).unwrap();
            let expected = hull(&[vec![0, 0], vec![0, h1], vec![h2, 0]]).unwrap();
            assert_eq!(p, expected);
        }
    }

    #[test]
    fn standard_triangle_counts() {
        let c = standard_triangle_census(&s(&[0, 1, 2]), &s(&[0, 4])).unwrap();
        let counts: Vec<(u8, u64)> = c.entries.iter().map(|e| (e.clause, e.count)).collect();
        assert_eq!(counts, vec![(1, 3), (2, 1)]);
        let c = standard_triangle_census(&s(&[0, 1, 2]), &s(&[0, 1, 2])).unwrap();
        assert_eq!(c.entries.iter().map(|e| (e.clause, e.count)).collect::<Vec<_>>(), vec![(5, 3)]);
        assert_eq!(c.nodes, 0);
    }

    #[test]
    fn standard_triangle_total_is_the_rational_curve_genus_defect() {
        // The curve is a rational plane curve of degree L(B_1 + B_2) with
        // every singular point in the torus.
        for (b1, b2) in [(&[0, 1, 3][..], &[0, 2, 3][..]), (&[0, 2, 5], &[0, 3, 5]), (&[0, 1, 2], &[0, 4]), (&[0, 2, 4], &[0, 1, 3])] {
            let c = standard_triangle_census(&s(b1), &s(b2)).unwrap();
            let l = (b1[b1.len() - 1] + b2[b2.len() - 1]) as u64;
            assert_eq!(c.total_delta, (l - 1) * (l - 2) / 2, "{b1:?} {b2:?}");
        }
    }
}
