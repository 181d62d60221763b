//! Ultratropical data of a spatial curve with `n = 1` horizontal and `k = 2`
//! vertical coordinates: direction extensions, nested-boxes tangency matrices,
//! their `G` sums and the total δ assembled from mixed volumes.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::geom::{mixed_volume, minkowski_sum, sublattice_mixed_volume, GeomError, LatticePolytope};
use crate::lattice::{crop, iota_sequence, vertical_index, Covector, Index, IotaSequence, LatticeError, SupportSet};

/// Number of vertical coordinates; the horizontal ones come first.
pub const VERTICAL: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UltratropError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("iota sequence {iota} of extension {gamma:?} contains INFINITE")]
    InfiniteIndex { gamma: Vec<i64>, iota: String },
    #[error("{what} = {value} is odd")]
    ParityViolation { what: &'static str, value: i64 },
    #[error("assumptions violated: {0}")]
    AssumptionViolated(String),
    #[error("supports must be a nonempty pair in Z^3")]
    Shape,
    #[error("total δ came out negative ({0})")]
    NegativeTotal(i64),
}

fn polytope(a: &SupportSet) -> Result<LatticePolytope, GeomError> {
    LatticePolytope::from_lattice_points(a.points())
}

fn sum_polytope(sets: &[SupportSet]) -> Result<LatticePolytope, GeomError> {
    let mut acc = polytope(&sets[0])?;
    for s in &sets[1..] {
        acc = minkowski_sum(&acc, &polytope(s)?)?;
    }
    Ok(acc)
}

fn vertical_part(gamma: &[i64]) -> &[i64] {
    &gamma[gamma.len() - VERTICAL..]
}

/// Outer facet normals of `Σ conv(A_m)`, each primitive.
fn facet_normals(sets: &[SupportSet]) -> Result<Vec<Vec<i64>>, GeomError> {
    let mut normals: Vec<Vec<i64>> = sum_polytope(sets)?.facets().into_iter().map(|(n, _)| n).collect();
    normals.sort();
    normals.dedup();
    Ok(normals)
}

/// Facet normals of the Minkowski sum whose vertical part is `delta`.
pub fn direction_extensions(sets: &[SupportSet], delta: &Covector) -> Result<Vec<Covector>, UltratropError> {
    assert!(delta.is_primitive(), "direction must be primitive");
    Ok(facet_normals(sets)?
        .into_iter()
        .filter(|n| vertical_part(n) == delta.coords())
        .map(|n| Covector::new(n).expect("facet normals are nonzero"))
        .collect())
}

/// Facet normals grouped by vertical part: the horizontal ones (vertical part
/// 0), the ones over each primitive direction, and those whose vertical part
/// is a proper multiple of a primitive vector.
struct FacetClasses {
    horizontal: Vec<Covector>,
    by_direction: BTreeMap<Vec<i64>, Vec<Covector>>,
    imprimitive: Vec<Covector>,
}

fn classify_facets(sets: &[SupportSet]) -> Result<FacetClasses, GeomError> {
    let mut classes =
        FacetClasses { horizontal: Vec::new(), by_direction: BTreeMap::new(), imprimitive: Vec::new() };
    for n in facet_normals(sets)? {
        let tail = vertical_part(&n).to_vec();
        let g = tail.iter().fold(0i64, |g, c| g.gcd(c));
        let gamma = Covector::new(n).expect("facet normals are nonzero");
        match g {
            0 => classes.horizontal.push(gamma),
            1 => classes.by_direction.entry(tail).or_default().push(gamma),
            _ => classes.imprimitive.push(gamma),
        }
    }
    Ok(classes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    /// Vertical index of the whole tuple.
    pub ind_v: Index,
    pub indv1: bool,
    pub same_proj: bool,
    /// Human-readable failures, empty when both checks pass.
    pub failures: Vec<String>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.indv1 && self.same_proj
    }
}

/// Checks `ind_v(A) = 1` and that no one-element subtuple whose `γ`-face is a
/// segment lies along `ker δ` for any direction `δ` of the fan.
///
/// For `k = 2` the only proper subtuples are single sets, and a face that is
/// shiftable into a line contains `ker δ` exactly when it is parallel to
/// `(0, -δ_2, δ_1)`; the full tuple is never tested because its faces over a
/// facet always span `ker δ`.
pub fn check_assumptions(sets: &[SupportSet]) -> Result<AssumptionReport, UltratropError> {
    let ind_v = vertical_index(sets, VERTICAL);
    let indv1 = ind_v == Index::Finite(1);
    let mut failures = Vec::new();
    if !indv1 {
        failures.push(format!("ind_v = {ind_v}, expected 1"));
    }
    let classes = classify_facets(sets)?;
    for (delta, gammas) in &classes.by_direction {
        let kernel = [0i128, -i128::from(delta[1]), i128::from(delta[0])];
        for gamma in gammas {
            for (m, a) in sets.iter().enumerate() {
                let rows = crop(a, gamma, 0).difference_rows();
                if crate::lattice::hnf::rank(&rows) != 1 {
                    continue;
                }
                let with_kernel: Vec<Vec<i128>> = rows.iter().cloned().chain([kernel.to_vec()]).collect();
                if crate::lattice::hnf::rank(&with_kernel) == 1 {
                    failures.push(format!(
                        "face of A_{} in direction {:?} contains ker δ for δ = {delta:?}",
                        m + 1,
                        gamma.coords()
                    ));
                }
            }
        }
    }
    let same_proj = failures.len() == usize::from(!indv1);
    Ok(AssumptionReport { ind_v, indv1, same_proj, failures })
}

/// Relation depth `κ` of two elements of one block: one more than the first
/// level at which their box addresses differ. The level-`d` address of element
/// `r` is `r / i_{d+1}`, so the level-0 boxes hold `i_1` consecutive elements.
fn kappa(iota: &[u64], r: u64, s: u64) -> u64 {
    let level = iota.iter().position(|&i| r / i != s / i).unwrap_or(iota.len());
    level as u64 + 1
}

/// One diagonal block: an extension, its crop mixed volume and its ι-sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub gamma: Covector,
    pub size: u64,
    pub iota: IotaSequence,
    pub entries: Vec<Vec<u64>>,
}

impl Block {
    fn iota_values(&self) -> Vec<u64> {
        self.iota.finite_values().expect("blocks are built from finite sequences")
    }

    pub fn entry_sum(&self) -> u64 {
        self.entries.iter().flatten().sum()
    }

    /// `i_1 Σ_d (i_d - 1)`.
    pub fn closed_form(&self) -> u64 {
        let iota = self.iota_values();
        iota[0] * iota.iter().map(|i| i - 1).sum::<u64>()
    }

    /// `|R| Σ_d (i_d - 1)`: the closed form with the block size as the leading factor.
    pub fn calibrated(&self) -> u64 {
        self.size * self.iota_values().iter().map(|i| i - 1).sum::<u64>()
    }

    /// `κ(p, r) >= min(κ(p, q), κ(q, r))` for distinct `p, q, r`.
    pub fn is_ultrametric(&self) -> bool {
        let n = self.entries.len();
        let e = &self.entries;
        (0..n).all(|p| {
            (0..n).filter(|&q| q != p).all(|q| {
                (0..n).filter(|&r| r != p && r != q).all(|r| e[p][r] >= e[p][q].min(e[q][r]))
            })
        })
    }
}

fn block_entries(iota: &[u64], size: u64) -> Vec<Vec<u64>> {
    (0..size)
        .map(|r| (0..size).map(|s| if r == s { 0 } else { kappa(iota, r, s) }).collect())
        .collect()
}

/// The tangency block of one extension `γ`, or `None` when its crop mixed
/// volume vanishes.
pub fn nested_boxes_matrix(sets: &[SupportSet], gamma: &Covector) -> Result<Option<Block>, UltratropError> {
    let faces: Vec<LatticePolytope> =
        sets.iter().map(|a| polytope(&crop(a, gamma, 0))).collect::<Result<_, _>>()?;
    let size = sublattice_mixed_volume(&faces)?;
    if size == 0 {
        return Ok(None);
    }
    let iota = iota_sequence(sets, gamma, VERTICAL)?;
    let values = iota.finite_values().ok_or_else(|| UltratropError::InfiniteIndex {
        gamma: gamma.coords().to_vec(),
        iota: format!("{:?}", iota.values.iter().map(ToString::to_string).collect::<Vec<_>>()),
    })?;
    let entries = block_entries(&values, size);
    Ok(Some(Block { gamma: gamma.clone(), size, iota, entries }))
}

/// Block-diagonal tangency matrix over all extensions of one direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangencyMatrix {
    pub delta: Covector,
    pub blocks: Vec<Block>,
}

impl TangencyMatrix {
    pub fn size(&self) -> u64 {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// The assembled matrix; entries across blocks are 0.
    pub fn entries(&self) -> Vec<Vec<u64>> {
        let n = self.size() as usize;
        let mut m = vec![vec![0; n]; n];
        let mut offset = 0;
        for b in &self.blocks {
            for (i, row) in b.entries.iter().enumerate() {
                m[offset + i][offset..offset + row.len()].copy_from_slice(row);
            }
            offset += b.entries.len();
        }
        m
    }

    pub fn is_ultrametric(&self) -> bool {
        self.blocks.iter().all(Block::is_ultrametric)
    }

    pub fn g_sum(&self) -> GSum {
        GSum {
            direct: self.blocks.iter().map(Block::entry_sum).sum(),
            closed_form: self.blocks.iter().map(Block::closed_form).sum(),
            calibrated: self.blocks.iter().map(Block::calibrated).sum(),
        }
    }
}

pub fn tangency_matrix(sets: &[SupportSet], delta: &Covector) -> Result<TangencyMatrix, UltratropError> {
    let mut blocks = Vec::new();
    for gamma in direction_extensions(sets, delta)? {
        blocks.extend(nested_boxes_matrix(sets, &gamma)?);
    }
    Ok(TangencyMatrix { delta: delta.clone(), blocks })
}

/// The three readings of `G^δ`: the matrix entry sum, the lemma's closed form
/// and its variant weighted by block size.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GSum {
    pub direct: u64,
    pub closed_form: u64,
    pub calibrated: u64,
}

impl GSum {
    pub fn get(&self, convention: GConvention) -> u64 {
        match convention {
            GConvention::Direct => self.direct,
            GConvention::ClosedForm => self.closed_form,
            GConvention::Calibrated => self.calibrated,
        }
    }
}

impl std::ops::Add for GSum {
    type Output = GSum;
    fn add(self, o: GSum) -> GSum {
        GSum {
            direct: self.direct + o.direct,
            closed_form: self.closed_form + o.closed_form,
            calibrated: self.calibrated + o.calibrated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GConvention {
    Direct,
    ClosedForm,
    Calibrated,
}

/// The convention entering [`thsum_total`]; the cusp and `A_4` ground truths
/// rule out the direct entry sum.
pub const WIRED_CONVENTION: GConvention = GConvention::ClosedForm;

pub fn g_sum(sets: &[SupportSet], delta: &Covector) -> Result<GSum, UltratropError> {
    Ok(tangency_matrix(sets, delta)?.g_sum())
}

/// `(e + area - g) / 2`.
pub fn labstr_delta_sum(euler_normalization: i64, newton_area: i64, g_total: i64) -> Result<i64, UltratropError> {
    let twice = euler_normalization + newton_area - g_total;
    if twice.is_odd() {
        return Err(UltratropError::ParityViolation { what: "e + area - G", value: twice });
    }
    Ok(twice / 2)
}

/// Every term of the total-δ formula, with all three `G` readings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThsumReport {
    /// `MV(j_1 A_1, j_1 A_2, j_2 A_1, j_2 A_2)` in `Z^4`.
    pub mv_doubled: u64,
    /// `MV(A_1, A_2, A_1 + A_2)` in `Z^3`.
    pub mv_base: u64,
    /// Sum over horizontal facets of the crop mixed volumes.
    pub horizontal: u64,
    pub g: GSum,
    pub convention: GConvention,
    pub matrices: Vec<TangencyMatrix>,
    /// Facets whose vertical part is not primitive; they extend no direction.
    pub skipped_facets: Vec<Covector>,
    pub assumptions: AssumptionReport,
    pub total: u64,
}

impl ThsumReport {
    /// The total under another `G` convention, if it is a nonnegative integer.
    pub fn total_with(&self, convention: GConvention) -> Option<u64> {
        let twice = self.mv_doubled as i64 - self.mv_base as i64 + self.horizontal as i64
            - self.g.get(convention) as i64;
        (twice >= 0 && twice % 2 == 0).then_some(twice as u64 / 2)
    }
}

/// `j_1(x, y) = (x, 0, y)` and `j_2(x, y) = (0, x, y)`: the two summand
/// embeddings of `Z^3 ⊕ Z^3` composed with the quotient by the vertical diagonal.
const J1: [[i64; 3]; 4] = [[1, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 1]];
const J2: [[i64; 3]; 4] = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];

fn embed(p: &LatticePolytope, rows: &[[i64; 3]; 4]) -> Result<LatticePolytope, GeomError> {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    p.linear_image(&rows)
}

/// `MV(j_1 A_1, j_1 A_2, j_2 A_1, j_2 A_2)`.
pub fn doubled_mixed_volume(a1: &LatticePolytope, a2: &LatticePolytope) -> Result<u64, GeomError> {
    mixed_volume(&[embed(a1, &J1)?, embed(a2, &J1)?, embed(a1, &J2)?, embed(a2, &J2)?])
}

fn check_shape(a1: &SupportSet, a2: &SupportSet) -> Result<(), UltratropError> {
    if a1.dim() != 1 + VERTICAL || a2.dim() != 1 + VERTICAL {
        return Err(UltratropError::Shape);
    }
    Ok(())
}

/// Sum of the δ-invariants of the curve cut out by generic polynomials with
/// supports `A_1, A_2 ⊂ Z^3`, with every term of the formula.
pub fn thsum_report(a1: &SupportSet, a2: &SupportSet) -> Result<ThsumReport, UltratropError> {
    check_shape(a1, a2)?;
    let sets = [a1.clone(), a2.clone()];
    let assumptions = check_assumptions(&sets)?;
    if !assumptions.passed() {
        return Err(UltratropError::AssumptionViolated(assumptions.failures.join("; ")));
    }
    let (p1, p2) = (polytope(a1)?, polytope(a2)?);
    let mv_doubled = doubled_mixed_volume(&p1, &p2)?;
    let mv_base = mixed_volume(&[p1.clone(), p2.clone(), minkowski_sum(&p1, &p2)?])?;

    let classes = classify_facets(&sets)?;
    let mut horizontal = 0;
    for gamma in &classes.horizontal {
        let faces: Vec<LatticePolytope> =
            sets.iter().map(|a| polytope(&crop(a, gamma, 0))).collect::<Result<_, _>>()?;
        horizontal += sublattice_mixed_volume(&faces)?;
    }
    let mut matrices = Vec::new();
    let mut g = GSum::default();
    for (delta, gammas) in &classes.by_direction {
        let mut blocks = Vec::new();
        for gamma in gammas {
            blocks.extend(nested_boxes_matrix(&sets, gamma)?);
        }
        let m = TangencyMatrix { delta: Covector::new(delta.clone())?, blocks };
        g = g + m.g_sum();
        matrices.push(m);
    }

    let twice = mv_doubled as i64 - mv_base as i64 + horizontal as i64 - g.get(WIRED_CONVENTION) as i64;
    if twice.is_odd() {
        return Err(UltratropError::ParityViolation { what: "twice the total δ", value: twice });
    }
    if twice < 0 {
        return Err(UltratropError::NegativeTotal(twice / 2));
    }
    Ok(ThsumReport {
        mv_doubled,
        mv_base,
        horizontal,
        g,
        convention: WIRED_CONVENTION,
        matrices,
        skipped_facets: classes.imprimitive,
        assumptions,
        total: twice as u64 / 2,
    })
}

pub fn thsum_total(a1: &SupportSet, a2: &SupportSet) -> Result<u64, UltratropError> {
    Ok(thsum_report(a1, a2)?.total)
}

/// The lift `{(b, 0, 0)} ∪ {e}` of a support in `Z^1`, with `e` the unit
/// vector of vertical coordinate `axis`.
pub fn lift_with_unit(b: &SupportSet, axis: usize) -> SupportSet {
    let mut unit = vec![0i64; 1 + VERTICAL];
    unit[1 + axis] = 1;
    let pts = b.values().into_iter().map(|v| vec![v, 0, 0]).chain([unit]);
    SupportSet::collect(1 + VERTICAL, pts).expect("lift is nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> SupportSet {
        SupportSet::from_ints(v).unwrap()
    }

    fn unit_lift(b1: &[i64], b2: &[i64]) -> (SupportSet, SupportSet) {
        (lift_with_unit(&ints(b1), 0), lift_with_unit(&ints(b2), 1))
    }

    fn cov(c: &[i64]) -> Covector {
        Covector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn kappa_blocks() {
        assert_eq!(block_entries(&[1], 3), vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(block_entries(&[2, 1], 2), vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(block_entries(&[2, 2, 1], 2), vec![vec![0, 3], vec![3, 0]]);
        // Two level-0 boxes of two elements each.
        let m = block_entries(&[2, 1], 4);
        assert_eq!(m[0], vec![0, 2, 1, 1]);
        assert_eq!(m[2], vec![1, 1, 0, 2]);
    }

    #[test]
    fn g_conventions_differ() {
        let iota = IotaSequence { gamma: cov(&[1, 0, 0]), values: vec![Index::Finite(2), Index::Finite(1)] };
        let b = Block { gamma: cov(&[1, 0, 0]), size: 2, entries: block_entries(&[2, 1], 2), iota };
        assert_eq!((b.entry_sum(), b.closed_form(), b.calibrated()), (4, 2, 2));
        assert!(b.is_ultrametric());
    }

    #[test]
    fn unit_lift_assumptions_pass() {
        let (a1, a2) = unit_lift(&[0, 2], &[0, 3]);
        let r = check_assumptions(&[a1, a2]).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn planar_supports_fail_indv1() {
        let a = SupportSet::new(3, vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let r = check_assumptions(&[a.clone(), a]).unwrap();
        assert!(!r.indv1);
    }

    #[test]
    fn extensions_of_non_fan_direction_are_empty() {
        let (a1, a2) = unit_lift(&[0, 2], &[0, 3]);
        assert!(direction_extensions(&[a1, a2], &cov(&[1, 1])).unwrap().is_empty());
    }

    #[test]
    fn prism_extensions_lift_edge_normals() {
        let tri = |b: &[i64]| {
            let pts = b.iter().flat_map(|&x| [vec![x, 0, 0], vec![x, 1, 0], vec![x, 0, 1]]);
            SupportSet::collect(3, pts).unwrap()
        };
        let sets = [tri(&[0, 1]), tri(&[0, 2])];
        for d in [[0, -1], [-1, 0], [1, 1]] {
            let ext = direction_extensions(&sets, &cov(&d)).unwrap();
            assert_eq!(ext, vec![cov(&[0, d[0], d[1]])]);
        }
    }

    #[test]
    fn doubled_mixed_volume_of_unit_lift_is_newton_area() {
        let (a1, a2) = unit_lift(&[0, 2], &[0, 3]);
        assert_eq!(doubled_mixed_volume(&polytope(&a1).unwrap(), &polytope(&a2).unwrap()).unwrap(), 6);
    }

    #[test]
    fn cusp_total() {
        let (a1, a2) = unit_lift(&[0, 2], &[0, 3]);
        let r = thsum_report(&a1, &a2).unwrap();
        assert_eq!((r.mv_doubled, r.mv_base, r.horizontal), (6, 5, 1));
        assert_eq!(r.total, 1);
        assert!(r.matrices.iter().all(TangencyMatrix::is_ultrametric));
    }

    #[test]
    fn a4_total() {
        let (a1, a2) = unit_lift(&[0, 2], &[0, 5]);
        assert_eq!(thsum_total(&a1, &a2).unwrap(), 2);
    }

    #[test]
    fn direct_reading_breaks_parity() {
        let (a1, a2) = unit_lift(&[0, 2], &[0, 3]);
        let r = thsum_report(&a1, &a2).unwrap();
        assert_eq!(r.g, GSum { direct: 8, closed_form: 0, calibrated: 0 });
        assert_eq!(r.total_with(GConvention::Direct), None);
    }

    #[test]
    fn mixed_support_total() {
        // (t^3, t^4 + t^5) has δ = 3 at the origin and one further node.
        let (a1, a2) = unit_lift(&[0, 3], &[0, 4, 5]);
        assert_eq!(thsum_total(&a1, &a2).unwrap(), 4);
    }

    #[test]
    fn labstr_parity() {
        assert_eq!(labstr_delta_sum(2, 4, 2).unwrap(), 2);
        assert!(matches!(labstr_delta_sum(1, 4, 2), Err(UltratropError::ParityViolation { .. })));
    }
}
