//! Generalized Vandermonde matrices `(x_i^{b_j})` at roots of unity: exact
//! ranks, combinatorial ranks, exhaustive sweeps of the degeneracy lemmas and
//! a search for the splitting conjecture beyond the proved range.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{span_gcd_of, SupportSet};
use crate::poly::{cyclotomic_rank, CyclotomicElement, FieldElement, SparsePoly};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VandermondeError {
    #[error("matrix entry ({row}, {col}) is zero")]
    ZeroEntry { row: usize, col: usize },
    #[error("residues of a root tuple must be distinct modulo {order}")]
    DuplicateResidue { order: u64 },
    #[error("order must be positive")]
    ZeroOrder,
    #[error("det_({a},{b},{c}) is not divisible by the Vandermonde determinant")]
    DivisionFailure { a: u32, b: u32, c: u32 },
    #[error("exponents must satisfy 0 <= a < b < c")]
    InvalidExponents,
}

/// `x_i = ζ_N^{e_i}` with distinct residues `e_i` modulo `N`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RootTuple {
    order: u64,
    exponents: Vec<u64>,
}

impl RootTuple {
    pub fn new(order: u64, exponents: Vec<u64>) -> Result<Self, VandermondeError> {
        if order == 0 {
            return Err(VandermondeError::ZeroOrder);
        }
        let residues: BTreeSet<u64> = exponents.iter().map(|e| e % order).collect();
        if residues.len() != exponents.len() {
            return Err(VandermondeError::DuplicateResidue { order });
        }
        Ok(RootTuple { order, exponents: exponents.iter().map(|e| e % order).collect() })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `⟨X⟩`: the lcm of the orders of all pairwise ratios; 1 for one root.
    pub fn span(&self) -> u64 {
        span_of(self.order, &self.exponents)
    }
}

/// Multiplicative order of `ζ_N^e`.
fn root_order(n: u64, e: i64) -> u64 {
    n / n.gcd(&e.rem_euclid(n as i64).unsigned_abs())
}

fn span_of(n: u64, exps: &[u64]) -> u64 {
    let mut l = 1u64;
    for (i, &a) in exps.iter().enumerate() {
        for &b in &exps[i + 1..] {
            l = l.lcm(&root_order(n, a as i64 - b as i64));
        }
    }
    l
}

/// `(x_i^{b_j})`.
pub fn vdm_matrix(x: &RootTuple, b: &SupportSet) -> Vec<Vec<CyclotomicElement>> {
    vdm_entries(x, &b.values())
}

fn vdm_entries(x: &RootTuple, b: &[i64]) -> Vec<Vec<CyclotomicElement>> {
    x.exponents
        .iter()
        .map(|&e| b.iter().map(|&bj| CyclotomicElement::zeta_power(x.order, e as i64 * bj)).collect())
        .collect()
}

/// Groups the indices `0..n` into classes under an equivalence given by `same`,
/// in order of first element.
fn classes(n: usize, same: impl Fn(usize, usize) -> bool) -> Partition {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match out.iter_mut().find(|c| same(c[0], i)) {
            Some(c) => c.push(i),
            None => out.push(vec![i]),
        }
    }
    out
}

fn check_nonzero<F: FieldElement>(m: &[Vec<F>]) -> Result<(), VandermondeError> {
    for (row, r) in m.iter().enumerate() {
        if let Some(col) = r.iter().position(FieldElement::vanishes) {
            return Err(VandermondeError::ZeroEntry { row, col });
        }
    }
    Ok(())
}

/// Index classes, each listed in increasing order.
pub type Partition = Vec<Vec<usize>>;

/// Classes of proportional rows and of proportional columns.
pub fn proportional_classes<F: FieldElement>(m: &[Vec<F>]) -> Result<(Partition, Partition), VandermondeError> {
    check_nonzero(m)?;
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    // Nonzero entries make proportionality a 2x2-minor test against column 0 or row 0.
    let row_classes = classes(rows, |i, k| (0..cols).all(|j| m[i][j].times(&m[k][0]) == m[k][j].times(&m[i][0])));
    let col_classes = classes(cols, |j, l| (0..rows).all(|i| m[i][j].times(&m[0][l]) == m[i][l].times(&m[0][j])));
    Ok((row_classes, col_classes))
}

/// Minimum of the numbers of proportional-row and proportional-column classes.
pub fn comb_rank<F: FieldElement>(m: &[Vec<F>]) -> Result<usize, VandermondeError> {
    let (r, c) = proportional_classes(m)?;
    Ok(r.len().min(c.len()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "partition", rename_all = "snake_case")]
pub enum Classification {
    ProportionalRows(Partition),
    ProportionalColumns(Partition),
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegeneracyWitness {
    pub roots: RootTuple,
    pub exponents: Vec<i64>,
    pub classification: Classification,
}

/// Root sets of `size` residues modulo `n` containing 0, one per orbit of
/// translation (keeping 0 in the set) and of `ζ -> ζ^u`. Sets lying in a
/// proper subgroup are skipped since they appear at a smaller order.
pub fn canonical_root_sets(n: u64, size: usize) -> Vec<RootTuple> {
    let units: Vec<u64> = (1..=n).filter(|u| u.gcd(&n) == 1).collect();
    let canon = |s: &[u64]| -> Vec<u64> {
        s.iter()
            .flat_map(|&t| {
                units.iter().map(move |&u| {
                    let mut v: Vec<u64> = s.iter().map(|&e| (u * ((e + n - t) % n)) % n).collect();
                    v.sort_unstable();
                    v
                })
            })
            .min()
            .expect("nonempty orbit")
    };
    let mut out = Vec::new();
    let mut rest: Vec<u64> = Vec::new();
    subsets_with_zero(n, size, 1, &mut rest, &mut |s| {
        if s.iter().fold(n, |g, &e| g.gcd(&e)) != 1 {
            return;
        }
        if canon(s) == s {
            out.push(RootTuple { order: n, exponents: s.to_vec() });
        }
    });
    out
}

fn subsets_with_zero(n: u64, size: usize, from: u64, acc: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if acc.len() + 1 == size {
        let mut s = vec![0];
        s.extend_from_slice(acc);
        f(&s);
        return;
    }
    for e in from..n {
        acc.push(e);
        subsets_with_zero(n, size, e + 1, acc, f);
        acc.pop();
    }
}

/// Exponent sets `{0 < b_1 < ... }` of the given size with `max <= bound`.
fn exponent_sets(size: usize, bound: i64) -> Vec<Vec<i64>> {
    fn go(size: usize, from: i64, bound: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if acc.len() == size {
            out.push(acc.clone());
            return;
        }
        for b in from..=bound {
            acc.push(b);
            go(size, b + 1, bound, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if size >= 1 {
        go(size, 1, bound, &mut vec![0], &mut out);
    }
    out
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build().expect("thread pool").install(f),
        None => f(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub checked: u64,
    pub degenerate: u64,
    pub counterexamples: Vec<DegeneracyWitness>,
}

/// Classifies a degenerate square matrix by a pair of proportional rows or columns.
fn classify(m: &[Vec<CyclotomicElement>]) -> Classification {
    let (rows, cols) = proportional_classes(m).expect("roots of unity are nonzero");
    if rows.len() < m.len() {
        Classification::ProportionalRows(rows)
    } else if cols.len() < m[0].len() {
        Classification::ProportionalColumns(cols)
    } else {
        Classification::Counterexample
    }
}

/// Every degenerate `3 x 3` matrix `M(a, b, c; x, y, z)` at roots of unity of
/// order at most `order_bound`, with `c <= exponent_bound`, has two
/// proportional rows or columns; returns the matrices that do not.
///
/// Rows are normalized to `a = 0` and roots to `z = 1`, which rescale rows
/// and columns.
pub fn check_3x3_lemma(order_bound: u64, exponent_bound: i64) -> SweepReport {
    let items: Vec<RootTuple> = (1..=order_bound).flat_map(|n| canonical_root_sets(n, 3)).collect();
    let exps = exponent_sets(3, exponent_bound);
    let per_item: Vec<(u64, u64, Vec<DegeneracyWitness>)> = items
        .par_iter()
        .map(|x| {
            let mut degenerate = 0;
            let mut bad = Vec::new();
            for b in &exps {
                let m = vdm_entries(x, b);
                if cyclotomic_rank(&m) < 3 {
                    degenerate += 1;
                    let classification = classify(&m);
                    if classification == Classification::Counterexample {
                        bad.push(DegeneracyWitness { roots: x.clone(), exponents: b.clone(), classification });
                    }
                }
            }
            (exps.len() as u64, degenerate, bad)
        })
        .collect();
    merge(per_item)
}

fn merge(parts: Vec<(u64, u64, Vec<DegeneracyWitness>)>) -> SweepReport {
    let mut report = SweepReport { checked: 0, degenerate: 0, counterexamples: Vec::new() };
    for (c, d, bad) in parts {
        report.checked += c;
        report.degenerate += d;
        report.counterexamples.extend(bad);
    }
    report
}

/// Two-part splittings of `0..n` into nonempty sets, each listed once.
fn two_part_splits(n: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    (1u64..1 << n.saturating_sub(1)).map(move |mask| {
        // Element n-1 always lies in the second part.
        let (a, b): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| i + 1 < n && mask & (1 << i) != 0);
        (a, b)
    })
}

/// `⟨X_1, X_2⟩ | ⟨B⟩` for some row splitting, or `⟨X⟩ | ⟨B_1, B_2⟩` for some
/// column splitting. Here `d | 0` for every `d`, so singleton parts impose nothing.
fn splitting_holds(x: &RootTuple, b: &[i64]) -> bool {
    let pick = |idx: &[usize]| -> Vec<u64> { idx.iter().map(|&i| x.exponents[i]).collect() };
    let pick_b = |idx: &[usize]| -> Vec<i64> { idx.iter().map(|&j| b[j]).collect() };
    let span_b = span_gcd_of(b);
    let rows_split = two_part_splits(x.len()).any(|(p, q)| {
        let l = span_of(x.order, &pick(&p)).lcm(&span_of(x.order, &pick(&q)));
        span_b.is_multiple_of(l)
    });
    rows_split
        || two_part_splits(b.len()).any(|(p, q)| {
            let g = span_gcd_of(&pick_b(&p)).gcd(&span_gcd_of(&pick_b(&q)));
            g.is_multiple_of(x.span())
        })
}

/// Every rank-2 matrix with three root rows and at most `width_bound`
/// exponent columns splits as the rank-2 lemma predicts; returns the ones
/// that do not.
pub fn check_rank2_splitting(order_bound: u64, width_bound: usize, exponent_bound: i64) -> SweepReport {
    let items: Vec<RootTuple> = (1..=order_bound).flat_map(|n| canonical_root_sets(n, 3)).collect();
    let exps: Vec<Vec<i64>> = (2..=width_bound).flat_map(|w| exponent_sets(w, exponent_bound)).collect();
    let per_item = items
        .par_iter()
        .map(|x| {
            let mut degenerate = 0;
            let mut bad = Vec::new();
            for b in &exps {
                if cyclotomic_rank(&vdm_entries(x, b)) != 2 {
                    continue;
                }
                degenerate += 1;
                if !splitting_holds(x, b) {
                    bad.push(DegeneracyWitness {
                        roots: x.clone(),
                        exponents: b.clone(),
                        classification: Classification::Counterexample,
                    });
                }
            }
            (exps.len() as u64, degenerate, bad)
        })
        .collect();
    merge(per_item)
}

/// Set partitions of `0..n` into at most `k` nonempty blocks, as block labels.
fn partitions_into_at_most(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(i: usize, n: usize, k: usize, used: usize, labels: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if i == n {
            return f(labels);
        }
        for l in 0..(used + 1).min(k) {
            labels.push(l);
            let found = go(i + 1, n, k, used.max(l + 1), labels, f);
            labels.pop();
            if found {
                return true;
            }
        }
        false
    }
    go(0, n, k, 0, &mut Vec::with_capacity(n), f)
}

/// A partition of `B` into at most `k` parts with every `x_i^g = 1`, where
/// `g` is the gcd of the span gcds of the parts.
fn conjectured_split(x: &RootTuple, b: &[i64], k: usize) -> Option<Vec<Vec<i64>>> {
    let mut witness = None;
    partitions_into_at_most(b.len(), k, &mut |labels| {
        let parts = labels.iter().max().map_or(0, |m| m + 1);
        let blocks: Vec<Vec<i64>> =
            (0..parts).map(|p| b.iter().zip(labels).filter(|(_, &l)| l == p).map(|(&v, _)| v).collect()).collect();
        let g = blocks.iter().fold(0u64, |g, blk| g.gcd(&span_gcd_of(blk)));
        let ok = x.exponents.iter().all(|&e| (e * g) % x.order == 0);
        if ok {
            witness = Some(blocks);
        }
        ok
    });
    witness
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureInstance {
    pub roots: RootTuple,
    pub exponents: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub k: usize,
    pub checked: u64,
    pub degenerate: u64,
    pub confirmed: u64,
    pub counterexamples: Vec<ConjectureInstance>,
    /// A counterexample for `k <= 2` contradicts the rank-2 lemma and points
    /// at an implementation error first.
    pub contradicts_proved_range: bool,
}

/// Degenerate `(k+1) x |B|` matrices with `X = {1, x_1, ..., x_k}` and coprime
/// `B ∋ 0`, `|B| > k`, `max B <= exponent_bound`, tested against the
/// conjectured splitting of `B`.
pub fn conjecture_search(k: usize, order_bound: u64, exponent_bound: i64) -> ConjectureReport {
    let items: Vec<RootTuple> = (1..=order_bound).flat_map(|n| canonical_root_sets(n, k + 1)).collect();
    let exps: Vec<Vec<i64>> = (k + 1..=exponent_bound as usize + 1)
        .flat_map(|w| exponent_sets(w, exponent_bound))
        .filter(|b| span_gcd_of(b) == 1)
        .collect();
    let per_item: Vec<(u64, u64, u64, Vec<ConjectureInstance>)> = items
        .par_iter()
        .map(|x| {
            let (mut degenerate, mut confirmed) = (0, 0);
            let mut bad = Vec::new();
            for b in &exps {
                if cyclotomic_rank(&vdm_entries(x, b)) > k {
                    continue;
                }
                degenerate += 1;
                match conjectured_split(x, b, k) {
                    Some(_) => confirmed += 1,
                    None => bad.push(ConjectureInstance { roots: x.clone(), exponents: b.clone() }),
                }
            }
            (exps.len() as u64, degenerate, confirmed, bad)
        })
        .collect();
    let mut report =
        ConjectureReport { k, checked: 0, degenerate: 0, confirmed: 0, counterexamples: Vec::new(), contradicts_proved_range: false };
    for (c, d, ok, bad) in per_item {
        report.checked += c;
        report.degenerate += d;
        report.confirmed += ok;
        report.counterexamples.extend(bad);
    }
    report.contradicts_proved_range = k <= 2 && !report.counterexamples.is_empty();
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurReport {
    /// `det (x^a x^b x^c; y^a ...; z^a ...)`.
    pub det: SparsePoly,
    /// `det / ((x - y)(y - z)(z - x))`.
    pub quotient: SparsePoly,
    /// Lex-leading exponents of `det` and of `quotient`.
    pub det_leading: Vec<u32>,
    pub quotient_leading: Vec<u32>,
    /// For `a = 0`, with `n = gcd(b, c)`: `det / det_{0,n,2n}` and its
    /// lex-leading exponent, expected to be `(c - 2n, b - n, 0)`.
    pub reduced: Option<(SparsePoly, Vec<u32>)>,
}

fn det3(a: u32, b: u32, c: u32) -> SparsePoly {
    let e = [a, b, c];
    // (permutation, sign) of the columns assigned to x, y, z.
    let perms = [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)];
    SparsePoly::from_terms(
        3,
        perms.iter().map(|(p, s)| (vec![e[p[0]], e[p[1]], e[p[2]]], Rational::from_integer((*s).into()))),
    )
}

fn leading(p: &SparsePoly) -> Vec<u32> {
    p.leading_term().map(|(e, _)| e.clone()).unwrap_or_default()
}

pub fn schur_det(a: u32, b: u32, c: u32) -> Result<SchurReport, VandermondeError> {
    if !(a < b && b < c) {
        return Err(VandermondeError::InvalidExponents);
    }
    let det = det3(a, b, c);
    let quotient = det.div_exact(&det3(0, 1, 2)).ok_or(VandermondeError::DivisionFailure { a, b, c })?;
    let reduced = if a == 0 {
        let n = b.gcd(&c);
        let q = det.div_exact(&det3(0, n, 2 * n)).ok_or(VandermondeError::DivisionFailure { a, b, c })?;
        let lead = leading(&q);
        Some((q, lead))
    } else {
        None
    };
    Ok(SchurReport { det_leading: leading(&det), quotient_leading: leading(&quotient), det, quotient, reduced })
}
