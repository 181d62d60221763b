//! Components of the singular locus of the sparse resultant of two univariate
//! supports, with degrees, transversal types and δ-invariants.

use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::census::{self, CensusError};
use crate::delta::{delta_sparse, DeltaError, Rescale};
use crate::lattice::{span_gcd, tuple_span_gcd, SupportSet};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("exceptional case: {0}")]
    ExceptionalCase(Exception),
    #[error("inconsistency detected: {0}")]
    InconsistencyDetected(String),
    #[error("supports must lie in Z^1")]
    NotOneDimensional,
    #[error(transparent)]
    Delta(#[from] DeltaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Exception {
    /// `B_i` is a single point.
    Singleton(usize),
    /// `L(B_1) = L(B_2) = 1`.
    UnitLengths,
}

impl fmt::Display for Exception {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exception::Singleton(i) => write!(f, "B_{i} is a single point"),
            Exception::UnitLengths => write!(f, "L(B_1) = L(B_2) = 1"),
        }
    }
}

/// Singularity type of a curve point, or of a generic transversal slice of a stratum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingularityKind {
    /// `m` smooth pairwise transversal branches.
    Ordinary(u64),
    /// The germ of `t -> (f_1(t), f_2(t))` with generic `f_i` supported on `B_i`.
    Sparse(SupportSet, SupportSet),
}

impl SingularityKind {
    pub fn delta(&self) -> Result<u64, DeltaError> {
        match self {
            SingularityKind::Ordinary(m) => Ok(m * m.saturating_sub(1) / 2),
            SingularityKind::Sparse(b1, b2) => Ok(delta_sparse(b1, b2, Rescale::Auto)?.delta),
        }
    }
}

impl fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityKind::Ordinary(m) => write!(f, "ordinary({m})"),
            SingularityKind::Sparse(b1, b2) => write!(f, "sparse({b1}, {b2})"),
        }
    }
}

impl Serialize for SingularityKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "type", rename_all = "snake_case")]
        enum Repr {
            Ordinary { m: u64 },
            Sparse { b1: Vec<i64>, b2: Vec<i64> },
        }
        match self {
            SingularityKind::Ordinary(m) => Repr::Ordinary { m: *m },
            SingularityKind::Sparse(b1, b2) => Repr::Sparse { b1: b1.values(), b2: b2.values() },
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StratumName {
    S0,
    SInf,
    S1,
    Sm(u64),
    T0,
    T1,
    T2,
}

impl fmt::Display for StratumName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumName::S0 => write!(f, "S_0"),
            StratumName::SInf => write!(f, "S_inf"),
            StratumName::S1 => write!(f, "S_1"),
            StratumName::Sm(m) => write!(f, "S_{m}"),
            StratumName::T0 => write!(f, "T_0"),
            StratumName::T1 => write!(f, "T_1"),
            StratumName::T2 => write!(f, "T_2"),
        }
    }
}

impl Serialize for StratumName {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Sub-components of `S_1`: the families `S_i^j` and the stratum `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum S1Component {
    S,
    Sij { i: usize, j: u64 },
}

impl fmt::Display for S1Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            S1Component::S => write!(f, "S"),
            S1Component::Sij { i, j } => write!(f, "S_{i}^{j}"),
        }
    }
}

impl Serialize for S1Component {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Known(u64),
    Unknown,
}

impl Degree {
    pub fn known(self) -> Option<u64> {
        match self {
            Degree::Known(d) => Some(d),
            Degree::Unknown => None,
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Known(d) => s.serialize_u64(*d),
            Degree::Unknown => s.serialize_str("UNKNOWN"),
        }
    }
}

fn rational_pair<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    q.as_ref().map(crate::geom::polytope::rational_pair).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    pub name: StratumName,
    pub exists: bool,
    /// The applicability condition that decided `exists`.
    pub condition: String,
    pub degree: Degree,
    /// The closed-form degree from the table, when it differs in kind from
    /// `degree` or is not emitted as a degree.
    #[serde(serialize_with = "rational_pair")]
    pub table_degree: Option<Rational>,
    /// Count of the matching singularities of the standard-triangle curve.
    pub census_degree: Option<u64>,
    pub transversal_type: SingularityKind,
    pub delta: u64,
    pub components: Vec<S1Component>,
}

/// How the input was brought to normal form: `B_i' = (B_i - shift_i) / scale`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Normalization {
    pub shifts: [i64; 2],
    pub scale: u64,
}

fn one_dimensional(b: &SupportSet) -> Result<(), StrataError> {
    if b.dim() != 1 {
        return Err(StrataError::NotOneDimensional);
    }
    Ok(())
}

fn ints(values: impl IntoIterator<Item = i64>) -> SupportSet {
    SupportSet::collect(1, values.into_iter().map(|v| vec![v])).expect("nonempty support")
}

fn length(b: &SupportSet) -> u64 {
    let v = b.values();
    (v[v.len() - 1] - v[0]) as u64
}

/// Shifts both minima to 0 and divides by `⟨B_1, B_2⟩`.
pub fn normalize_supports(b1: &SupportSet, b2: &SupportSet) -> Result<(SupportSet, SupportSet, Normalization), StrataError> {
    one_dimensional(b1)?;
    one_dimensional(b2)?;
    let shifts = [b1.values()[0], b2.values()[0]];
    let scale = tuple_span_gcd(&[b1.clone(), b2.clone()]).max(1);
    let norm = |b: &SupportSet, s: i64| ints(b.values().into_iter().map(|v| (v - s) / scale as i64));
    Ok((norm(b1, shifts[0]), norm(b2, shifts[1]), Normalization { shifts, scale }))
}

pub fn check_exceptional(b1: &SupportSet, b2: &SupportSet) -> Result<(), StrataError> {
    for (i, b) in [b1, b2].into_iter().enumerate() {
        if b.len() == 1 {
            return Err(StrataError::ExceptionalCase(Exception::Singleton(i + 1)));
        }
    }
    if length(b1) == 1 && length(b2) == 1 {
        return Err(StrataError::ExceptionalCase(Exception::UnitLengths));
    }
    Ok(())
}

/// A splitting `B_i = B_{i,1} ⊔ B_{i,2}` with `⟨B_{i,1}, B_{i,2}, B_{3-i}⟩ = m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// 1-based index of the split set.
    pub set: usize,
    pub m: u64,
    pub parts: [SupportSet; 2],
}

/// Every splitting of one support into two residue classes modulo `m`, for
/// `2 <= m <= L(B_1) + L(B_2)`. Two hits for the same `m` are reported as an
/// inconsistency.
pub fn find_m_decompositions(b1: &SupportSet, b2: &SupportSet) -> Result<Vec<Decomposition>, StrataError> {
    let sets = [b1, b2];
    let mut found: Vec<Decomposition> = Vec::new();
    for m in 2..=length(b1) + length(b2) {
        let mut hits = Vec::new();
        for i in 0..2 {
            let (split, other) = (sets[i], sets[1 - i]);
            // A singleton has span 0, which every m divides.
            if split.len() <= 2 || !span_gcd(other).is_multiple_of(m) {
                continue;
            }
            let mut classes: Vec<(i64, Vec<i64>)> = Vec::new();
            for v in split.values() {
                let r = v.mod_floor(&(m as i64));
                match classes.iter_mut().find(|(c, _)| *c == r) {
                    Some((_, members)) => members.push(v),
                    None => classes.push((r, vec![v])),
                }
            }
            if classes.len() != 2 {
                continue;
            }
            let mut parts = [ints(classes[0].1.clone()), ints(classes[1].1.clone())];
            parts.sort_by_key(|p| p.values()[0]);
            if tuple_span_gcd(&[parts[0].clone(), parts[1].clone(), other.clone()]) == m {
                hits.push(Decomposition { set: i + 1, m, parts });
            }
        }
        if hits.len() > 1 {
            return Err(StrataError::InconsistencyDetected(format!(
                "both supports decompose for m = {m}: {:?}",
                hits.iter().map(|h| h.set).collect::<Vec<_>>()
            )));
        }
        found.extend(hits);
    }
    Ok(found)
}

fn mirrored(b: &SupportSet) -> SupportSet {
    let top = *b.values().last().unwrap();
    ints(b.values().into_iter().map(|v| top - v))
}

fn shifted_to_zero(b: &SupportSet) -> SupportSet {
    let low = b.values()[0];
    ints(b.values().into_iter().map(|v| v - low))
}

/// `1 + min B_i ∈ B_i` for some `i`, which rules out `S_0`.
fn has_unit_gap(b1: &SupportSet, b2: &SupportSet) -> Option<usize> {
    [b1, b2].into_iter().position(|b| b.contains(&[b.values()[0] + 1])).map(|i| i + 1)
}

/// `B_2 = B_1 + shift` with three points each.
fn is_shifted_triple(b1: &SupportSet, b2: &SupportSet) -> bool {
    b1.len() == 3 && b2.len() == 3 && shifted_to_zero(b1) == shifted_to_zero(b2)
}

fn stratum(name: StratumName, exists: bool, condition: String, degree: Degree, kind: SingularityKind) -> Result<StratumReport, StrataError> {
    Ok(StratumReport {
        name,
        exists,
        condition,
        degree,
        table_degree: None,
        census_degree: None,
        delta: kind.delta()?,
        transversal_type: kind,
        components: Vec::new(),
    })
}

/// `δ` of the sparse germ at either end of the supports, as used in the `S_1` degree.
fn end_delta(b1: &SupportSet, b2: &SupportSet) -> Result<u64, StrataError> {
    Ok(delta_sparse(&shifted_to_zero(b1), &shifted_to_zero(b2), Rescale::Auto)?.delta)
}

/// `((L_1 + L_2 - 1)^2 - δ_0 - δ_∞ + 1) / 2`.
pub fn s1_table_degree(b1: &SupportSet, b2: &SupportSet) -> Result<Rational, StrataError> {
    let l = (length(b1) + length(b2)) as i64 - 1;
    let d0 = end_delta(b1, b2)? as i64;
    let dinf = end_delta(&mirrored(b1), &mirrored(b2))? as i64;
    Ok(Rational::new((l * l - d0 - dinf + 1).into(), 2.into()))
}

/// Every candidate stratum of supports in normal form, each with the
/// condition that decided whether it exists.
pub fn strata_trace(b1: &SupportSet, b2: &SupportSet) -> Result<Vec<StratumReport>, StrataError> {
    one_dimensional(b1)?;
    one_dimensional(b2)?;
    check_exceptional(b1, b2)?;
    let (l1, l2) = (length(b1), length(b2));
    let mut out = Vec::new();

    let decompositions = find_m_decompositions(b1, b2)?;
    for d in &decompositions {
        let table = length(&d.parts[0]) + length(&d.parts[1]) + if d.set == 1 { l2 } else { l1 };
        let mut s = stratum(
            StratumName::Sm(d.m),
            true,
            format!("B_{} = {} ⊔ {} with span gcd {} together with the other support", d.set, d.parts[0], d.parts[1], d.m),
            Degree::Known(table / d.m),
            SingularityKind::Ordinary(d.m),
        )?;
        s.table_degree = Some(Rational::from_integer(table.into()));
        out.push(s);
    }

    let gap = has_unit_gap(b1, b2);
    out.push(stratum(
        StratumName::S0,
        gap.is_none(),
        match gap {
            Some(i) => format!("1 + min B_{i} lies in B_{i}"),
            None => "no support contains 1 + its minimum".into(),
        },
        Degree::Known(1),
        SingularityKind::Sparse(shifted_to_zero(b1), shifted_to_zero(b2)),
    )?);
    let (m1, m2) = (mirrored(b1), mirrored(b2));
    let gap = has_unit_gap(&m1, &m2);
    out.push(stratum(
        StratumName::SInf,
        gap.is_none(),
        match gap {
            Some(i) => format!("max B_{i} - 1 lies in B_{i}"),
            None => "no support contains its maximum - 1".into(),
        },
        Degree::Known(1),
        SingularityKind::Sparse(m1, m2),
    )?);

    for (i, name) in [(1usize, StratumName::T1), (2, StratumName::T2)] {
        let (own, other) = if i == 1 { (b1, l2) } else { (b2, l1) };
        let exists = own.len() == 2 && other > 1;
        out.push(stratum(
            name,
            exists,
            format!("|B_{i}| = {} and L(B_{}) = {other}", own.len(), 3 - i),
            Degree::Known(1),
            SingularityKind::Ordinary(other),
        )?);
    }

    let triple = is_shifted_triple(b1, b2);
    out.push(stratum(
        StratumName::T0,
        triple,
        if triple { "B_2 is a shift of the three-point B_1".into() } else { "B_2 is not a shift of a three-point B_1".into() },
        Degree::Known(3),
        SingularityKind::Ordinary(l1),
    )?);

    let mut components = Vec::new();
    if !triple {
        for i in 1..=2usize {
            let (own, other) = if i == 1 { (b1, b2) } else { (b2, b1) };
            if other.len() <= 2 {
                continue;
            }
            let k = span_gcd(own);
            let excluded = |j: u64| decompositions.iter().any(|d| k.is_multiple_of(d.m) && j.is_multiple_of(k / d.m));
            components.extend((1..=k / 2).filter(|&j| !excluded(j)).map(|j| S1Component::Sij { i, j }));
        }
        if b1.len() > 2 && b2.len() > 2 {
            components.push(S1Component::S);
        }
    }
    let table = s1_table_degree(b1, b2)?;
    let generic = b1.len() > 2 && b2.len() > 2;
    let degree = match table.is_integer() && generic && !components.is_empty() {
        true => Degree::Known(u64::try_from(table.to_integer()).unwrap_or(0)),
        false => Degree::Unknown,
    };
    let mut s1 = stratum(
        StratumName::S1,
        !components.is_empty(),
        if triple {
            "T_0 exhausts the singular locus".into()
        } else if components.is_empty() {
            "no S_i^j family and no S stratum applies".into()
        } else {
            format!("components {}", components.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
        },
        degree,
        SingularityKind::Ordinary(2),
    )?;
    s1.table_degree = Some(table);
    s1.components = components;
    out.push(s1);
    Ok(out)
}

/// The existing strata of supports in normal form; with `cross_check`, every
/// stratum also carries the census count of the standard-triangle curve.
/// An `S_1` whose closed-form degree is not emitted gets the census count
/// whenever it is computable.
pub fn strata_report(b1: &SupportSet, b2: &SupportSet, cross_check: bool) -> Result<Vec<StratumReport>, StrataError> {
    let mut report: Vec<StratumReport> = strata_trace(b1, b2)?.into_iter().filter(|s| s.exists).collect();
    let needs_census = cross_check || report.iter().any(|s| s.name == StratumName::S1 && s.degree == Degree::Unknown);
    if !needs_census {
        return Ok(report);
    }
    let census = match census::standard_triangle_census(b1, b2) {
        Ok(c) => c,
        Err(CensusError::NegativeNodeCount { .. }) | Err(CensusError::Strata(_)) if !cross_check => return Ok(report),
        Err(e) => return Err(StrataError::InconsistencyDetected(format!("census cross-check failed: {e}"))),
    };
    for s in &mut report {
        s.census_degree = match s.name {
            StratumName::S1 => Some(census.nodes),
            name => Some(census.entries.iter().filter(|e| e.stratum == name).map(|e| e.count).sum()),
        };
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> SupportSet {
        SupportSet::from_ints(v).unwrap()
    }

    fn summary(r: &[StratumReport]) -> Vec<(String, Option<u64>, String, u64)> {
        r.iter().map(|s| (s.name.to_string(), s.degree.known(), s.transversal_type.to_string(), s.delta)).collect()
    }

    #[test]
    fn normalization_examples() {
        let (a, b, rec) = normalize_supports(&s(&[3, 5]), &s(&[2, 6])).unwrap();
        assert_eq!((a, b), (s(&[0, 1]), s(&[0, 2])));
        assert_eq!(rec, Normalization { shifts: [3, 2], scale: 2 });
        let (a, b, rec) = normalize_supports(&s(&[0, 2, 3]), &s(&[0, 1])).unwrap();
        assert_eq!((a, b, rec.scale), (s(&[0, 2, 3]), s(&[0, 1]), 1));
    }

    #[test]
    fn decomposition_examples() {
        let d = find_m_decompositions(&s(&[0, 1, 2]), &s(&[0, 4])).unwrap();
        assert_eq!(d, vec![Decomposition { set: 1, m: 2, parts: [s(&[0, 2]), s(&[1])] }]);
        assert!(find_m_decompositions(&s(&[0, 2, 3]), &s(&[0, 1])).unwrap().is_empty());
        assert!(find_m_decompositions(&s(&[0, 1, 2]), &s(&[0, 1, 2])).unwrap().is_empty());
    }

    #[test]
    fn exceptional_cases() {
        assert!(matches!(
            strata_report(&s(&[0]), &s(&[0, 3]), false),
            Err(StrataError::ExceptionalCase(Exception::Singleton(1)))
        ));
        assert!(matches!(
            strata_report(&s(&[0, 1]), &s(&[0, 1]), false),
            Err(StrataError::ExceptionalCase(Exception::UnitLengths))
        ));
    }

    #[test]
    fn shifted_triple_is_only_t0() {
        let r = strata_report(&s(&[0, 1, 2]), &s(&[0, 1, 2]), false).unwrap();
        assert_eq!(summary(&r), vec![("T_0".into(), Some(3), "ordinary(2)".into(), 1)]);
    }

    #[test]
    fn two_point_support_gives_t2() {
        let r = strata_report(&s(&[0, 2, 3]), &s(&[0, 1]), false).unwrap();
        assert_eq!(summary(&r), vec![("T_2".into(), Some(1), "ordinary(3)".into(), 3)]);
    }

    #[test]
    fn decomposable_support() {
        let r = strata_report(&s(&[0, 1, 2]), &s(&[0, 4]), false).unwrap();
        let names: Vec<String> = r.iter().map(|s| s.name.to_string()).collect();
        assert_eq!(names, vec!["S_2", "T_2", "S_1"]);
        assert_eq!(r[0].table_degree, Some(Rational::from_integer(6.into())));
        assert_eq!(r[0].degree, Degree::Known(3));
        assert_eq!(r[1].transversal_type, SingularityKind::Ordinary(2));
        assert_eq!(r[2].components, vec![S1Component::Sij { i: 2, j: 1 }]);
        assert_eq!(r[2].degree, Degree::Unknown);
    }

    #[test]
    fn s1_formula_is_non_integral_without_generic_families() {
        let t = s1_table_degree(&s(&[0, 1, 2]), &s(&[0, 1])).unwrap();
        assert_eq!(t, Rational::new(5.into(), 2.into()));
        let r = strata_trace(&s(&[0, 1, 2]), &s(&[0, 1])).unwrap();
        assert!(!r.iter().find(|s| s.name == StratumName::S1).unwrap().exists);
    }

    #[test]
    fn trace_explains_absent_strata() {
        let r = strata_trace(&s(&[0, 2, 3]), &s(&[0, 1])).unwrap();
        let s0 = r.iter().find(|s| s.name == StratumName::S0).unwrap();
        assert!(!s0.exists);
        assert_eq!(s0.condition, "1 + min B_2 lies in B_2");
    }
}
