//! Integer-lattice linear algebra and support-set combinatorics.

pub mod hnf;

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("support set is empty")]
    Empty,
    #[error("ambient dimension must be at least 1")]
    ZeroDimension,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("duplicate point {0:?}")]
    DuplicatePoint(Vec<i64>),
    #[error("covector is zero")]
    ZeroCovector,
    #[error("iota sequence does not reach 1 within {bound} crops (vertical index assumption violated)")]
    NonStabilizing { bound: i64 },
}

/// A finite, nonempty set of distinct points of `Z^dim`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSupport", into = "RawSupport")]
pub struct SupportSet {
    dim: usize,
    points: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RawSupport {
    dim: usize,
    points: Vec<Vec<i64>>,
}

impl TryFrom<RawSupport> for SupportSet {
    type Error = LatticeError;
    fn try_from(raw: RawSupport) -> Result<Self, Self::Error> {
        SupportSet::new(raw.dim, raw.points)
    }
}

impl From<SupportSet> for RawSupport {
    fn from(s: SupportSet) -> Self {
        RawSupport { dim: s.dim, points: s.points }
    }
}

impl SupportSet {
    pub fn new(dim: usize, points: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        if dim == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        if points.is_empty() {
            return Err(LatticeError::Empty);
        }
        let mut seen = BTreeSet::new();
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(LatticeError::DimensionMismatch { index, expected: dim, found: p.len() });
            }
            if !seen.insert(p.clone()) {
                return Err(LatticeError::DuplicatePoint(p.clone()));
            }
        }
        Ok(SupportSet { dim, points: seen.into_iter().collect() })
    }

    /// A subset of `Z^1`.
    pub fn from_ints(values: &[i64]) -> Result<Self, LatticeError> {
        SupportSet::new(1, values.iter().map(|&v| vec![v]).collect())
    }

    /// Like [`SupportSet::new`] but merges duplicates instead of rejecting them.
    pub fn collect(dim: usize, points: impl IntoIterator<Item = Vec<i64>>) -> Result<Self, LatticeError> {
        let set: BTreeSet<Vec<i64>> = points.into_iter().collect();
        SupportSet::new(dim, set.into_iter().collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Coordinates of a one-dimensional set, ascending.
    pub fn values(&self) -> Vec<i64> {
        self.points.iter().map(|p| p[0]).collect()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    pub fn translate(&self, shift: &[i64]) -> SupportSet {
        let points = self
            .points
            .iter()
            .map(|p| p.iter().zip(shift).map(|(a, b)| a + b).collect())
            .collect();
        SupportSet::new(self.dim, points).expect("translation preserves validity")
    }

    /// Differences `p - p0` against the first point, as `i128` rows.
    pub fn difference_rows(&self) -> Vec<Vec<i128>> {
        let base = &self.points[0];
        self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| i128::from(a - b)).collect())
            .collect()
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim == 1 {
            let v: Vec<String> = self.values().iter().map(i64::to_string).collect();
            write!(f, "{{{}}}", v.join(","))
        } else {
            write!(f, "{:?}", self.points)
        }
    }
}

/// A nonzero integer linear functional on `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Covector {
    coords: Vec<i64>,
}

impl Covector {
    pub fn new(coords: Vec<i64>) -> Result<Self, LatticeError> {
        if coords.iter().all(|&c| c == 0) {
            return Err(LatticeError::ZeroCovector);
        }
        Ok(Covector { coords })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_primitive(&self) -> bool {
        self.coords.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1
    }

    /// Divides out the gcd of the coordinates.
    pub fn primitive(&self) -> Covector {
        let g = self.coords.iter().fold(0i64, |g, &c| g.gcd(&c));
        Covector { coords: self.coords.iter().map(|c| c / g).collect() }
    }

    pub fn eval(&self, p: &[i64]) -> i64 {
        self.coords.iter().zip(p).map(|(a, b)| a * b).sum()
    }

    /// Maximum and minimum of the functional over a set.
    pub fn range(&self, a: &SupportSet) -> (i64, i64) {
        let vals = a.points().iter().map(|p| self.eval(p));
        let (lo, hi) = vals.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
        (lo, hi)
    }
}

/// A positive lattice index, or `Infinite` for a rank-deficient sublattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Finite(u64),
    Infinite,
}

impl Index {
    pub fn finite(self) -> Option<u64> {
        match self {
            Index::Finite(v) => Some(v),
            Index::Infinite => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(v) => write!(f, "{v}"),
            Index::Infinite => write!(f, "INFINITE"),
        }
    }
}

impl Serialize for Index {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Index::Finite(v) => s.serialize_u64(*v),
            Index::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .filter(|&v| v > 0)
                .map(Index::Finite)
                .ok_or_else(|| serde::de::Error::custom("index must be a positive integer")),
            serde_json::Value::String(s) if s == "INFINITE" => Ok(Index::Infinite),
            _ => Err(serde::de::Error::custom("expected positive integer or \"INFINITE\"")),
        }
    }
}

/// Gcd of all pairwise differences of integers; 0 for fewer than two values.
pub fn span_gcd_of(values: &[i64]) -> u64 {
    match values.first() {
        None => 0,
        Some(&v0) => values.iter().fold(0u64, |g, &v| g.gcd(&(v - v0).unsigned_abs())),
    }
}

/// Gcd of the pairwise differences of a subset of `Z^1`; a singleton gives 0.
pub fn span_gcd(b: &SupportSet) -> u64 {
    debug_assert_eq!(b.dim(), 1);
    span_gcd_of(&b.values())
}

/// Gcd of the span gcds; singletons impose no constraint because `gcd(0, x) = x`.
pub fn tuple_span_gcd(bs: &[SupportSet]) -> u64 {
    bs.iter().fold(0, |g, b| g.gcd(&span_gcd(b)))
}

/// The points of `a` within distance `d` of the `gamma`-maximal face.
pub fn crop(a: &SupportSet, gamma: &Covector, d: i64) -> SupportSet {
    let (_, top) = gamma.range(a);
    let kept = a.points().iter().filter(|p| gamma.eval(p) >= top - d).cloned();
    SupportSet::collect(a.dim(), kept).expect("the maximal face is never empty")
}

/// Index in `Z^n` of the horizontal projection of the difference lattice of
/// the tuple, where `n = dim - k` counts the leading coordinates.
pub fn vertical_index(sets: &[SupportSet], k: usize) -> Index {
    let dim = sets.first().map_or(0, SupportSet::dim);
    let n = dim.saturating_sub(k);
    if n == 0 {
        return Index::Finite(1);
    }
    let rows: Vec<Vec<i128>> = sets
        .iter()
        .flat_map(|s| s.difference_rows())
        .map(|r| r[..n].to_vec())
        .collect();
    match hnf::index_in_full_lattice(&rows, n) {
        Some(ix) => Index::Finite(u64::try_from(ix).expect("index fits in u64")),
        None => Index::Infinite,
    }
}

/// Vertical indices of successive crops, ending at the first 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IotaSequence {
    pub gamma: Covector,
    pub values: Vec<Index>,
}

impl IotaSequence {
    /// `true` when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| matches!(v, Index::Finite(_)))
    }

    pub fn finite_values(&self) -> Option<Vec<u64>> {
        self.values.iter().map(|v| v.finite()).collect()
    }
}

/// `i_{d+1} = vertical_index(crop_d)` for `d = 0, 1, ...` until the value 1.
pub fn iota_sequence(sets: &[SupportSet], gamma: &Covector, k: usize) -> Result<IotaSequence, LatticeError> {
    let bound = sets
        .iter()
        .map(|a| {
            let (lo, hi) = gamma.range(a);
            hi - lo
        })
        .max()
        .unwrap_or(0);
    let mut values = Vec::new();
    for d in 0..=bound {
        let crops: Vec<SupportSet> = sets.iter().map(|a| crop(a, gamma, d)).collect();
        let ix = vertical_index(&crops, k);
        values.push(ix);
        if ix == Index::Finite(1) {
            return Ok(IotaSequence { gamma: gamma.clone(), values });
        }
    }
    Err(LatticeError::NonStabilizing { bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> SupportSet {
        SupportSet::from_ints(v).unwrap()
    }

    fn set3(points: &[[i64; 3]]) -> SupportSet {
        SupportSet::new(3, points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn span_gcd_examples() {
        assert_eq!(span_gcd(&ints(&[0, 2, 4])), 2);
        assert_eq!(span_gcd(&ints(&[5])), 0);
        assert_eq!(span_gcd(&ints(&[0, 2, 3])), 1);
    }

    #[test]
    fn tuple_span_gcd_examples() {
        assert_eq!(tuple_span_gcd(&[ints(&[0, 2]), ints(&[0, 4])]), 2);
        assert_eq!(tuple_span_gcd(&[ints(&[0, 2]), ints(&[0, 3])]), 1);
        assert_eq!(tuple_span_gcd(&[ints(&[0]), ints(&[3]), ints(&[0, 4])]), 4);
    }

    #[test]
    fn crop_examples() {
        let a = SupportSet::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 2]]).unwrap();
        let up = Covector::new(vec![0, 1]).unwrap();
        assert_eq!(crop(&a, &up, 0).points(), &[vec![0, 2]]);
        assert_eq!(crop(&a, &up, 2), a);
        let b = set3(&[[0, 0, 0], [2, 0, 0], [0, 1, 0]]);
        let e1 = Covector::new(vec![1, 0, 0]).unwrap();
        assert_eq!(crop(&b, &e1, 0).points(), &[vec![2, 0, 0]]);
    }

    #[test]
    fn vertical_index_examples() {
        let a = set3(&[[0, 0, 0], [2, 0, 0]]);
        assert_eq!(vertical_index(&[a.clone(), set3(&[[0, 0, 0], [3, 0, 0]])], 2), Index::Finite(1));
        assert_eq!(vertical_index(&[a, set3(&[[0, 0, 0], [4, 0, 1]])], 2), Index::Finite(2));
        assert_eq!(vertical_index(&[set3(&[[0, 0, 0], [0, 1, 0]])], 2), Index::Infinite);
    }

    #[test]
    fn iota_of_gcd_window() {
        // gamma ties 0 with 4 and 0 with 6 at the top, while 7 sits one step below.
        let a1 = set3(&[[0, 0, 0], [4, 0, 4]]);
        let a2 = set3(&[[0, 0, 0], [6, 0, 6], [7, 0, 8]]);
        let g = Covector::new(vec![1, 0, -1]).unwrap();
        let seq = iota_sequence(&[a1, a2], &g, 2).unwrap();
        assert_eq!(seq.values, vec![Index::Finite(2), Index::Finite(1)]);
    }

    #[test]
    fn iota_reports_rank_deficient_crops() {
        let a1 = set3(&[[4, 0, 0], [4, 1, 0]]);
        let a2 = set3(&[[6, 0, 0], [6, 0, 1], [7, 0, 0]]);
        let g = Covector::new(vec![-1, 0, 0]).unwrap();
        let seq = iota_sequence(&[a1, a2], &g, 2).unwrap();
        assert_eq!(seq.values, vec![Index::Infinite, Index::Finite(1)]);
    }

    #[test]
    fn iota_single_step() {
        let a1 = set3(&[[0, 0, 0], [1, 0, 0], [0, 1, 0]]);
        let g = Covector::new(vec![0, -1, 0]).unwrap();
        let seq = iota_sequence(&[a1], &g, 2).unwrap();
        assert_eq!(seq.values, vec![Index::Finite(1)]);
    }

    #[test]
    fn rejects_duplicates() {
        assert_eq!(
            SupportSet::from_ints(&[1, 1]),
            Err(LatticeError::DuplicatePoint(vec![1]))
        );
    }
}
