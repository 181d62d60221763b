//! The acceptance suite: eight end-to-end criteria, each with a time budget.
//! Random inputs come from a ChaCha stream seeded by `TROPSING_SEED`.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::census::{census_with_report, standard_triangle_census, times_standard_triangle};
use crate::delta::{degenerate_pair, delta_oracle, delta_sparse, random_nondegenerate, Rescale};
use crate::geom::{minkowski_sum, mixed_area, mixed_fiber_polygon, mixed_volume, LatticePolytope, Polygon};
use crate::lattice::SupportSet;
use crate::poly::{fulton_intersection_number, Multiplicity, SparsePoly};
use crate::strata::{strata_report, Degree, StratumName};
use crate::ultratrop::{doubled_mixed_volume, lift_with_unit, thsum_report, TangencyMatrix};
use crate::vandermonde::check_3x3_lemma;
use crate::Rational;

pub const DEFAULT_SEED: u64 = 20_240_611;

/// `MV_3(P, Q, {0} x s) = MFP_PAIRING_SCALE * MV_2(MFP(P, Q), s)`, fixed on
/// the unit-lift triangles.
pub const MFP_PAIRING_SCALE: i64 = 1;

/// `TROPSING_SEED` when set and numeric, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("TROPSING_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{verdict}] criterion {}: {} ({} ms of {} ms) {}",
            self.id, self.title, self.elapsed_ms, self.budget_ms, self.detail
        )
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<String, String>;

const CRITERIA: [(u8, &str, u64, Check); 8] = [
    (1, "closed-form delta equals the intersection oracle", 120, delta_vs_oracle),
    (2, "degenerate coefficients raise delta strictly", 60, strict_excess),
    (3, "mixed fiber polygon of the unit-lift hulls", 1, unit_lift_mfp),
    (4, "Newton polygon area equals the doubled mixed volume", 120, fib_area),
    (5, "thsum ground truth on the cusp and A4 lifts", 5, thsum_ground_truth),
    (6, "3x3 degeneracy lemma up to order 12, exponent 10", 600, lemma_3x3),
    (7, "strata degrees equal standard-triangle census counts", 60, strata_census_duality),
    (8, "property suites", 300, property_suites),
];

pub fn criterion_ids() -> impl Iterator<Item = u8> {
    CRITERIA.iter().map(|c| c.0)
}

/// Runs criterion `id`; each criterion draws from its own stream of `seed`.
pub fn run(id: u8, seed: u64) -> Option<Outcome> {
    let &(id, title, budget_s, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(id));
    let start = Instant::now();
    let result = check(&mut rng);
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    let (ok, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if ok && elapsed > budget {
        detail.push_str("; over time budget");
    }
    Some(Outcome {
        id,
        title,
        passed: ok && elapsed <= budget,
        detail,
        elapsed_ms: elapsed.as_millis(),
        budget_ms: budget.as_millis(),
    })
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    criterion_ids().filter_map(|id| run(id, seed)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ints(v: &[i64]) -> SupportSet {
    SupportSet::from_ints(v).expect("valid support")
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
}

fn random_exponents(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let size = rng.gen_range(1..=4);
    let mut pool: Vec<i64> = (1..=15).collect();
    pool.shuffle(rng);
    pool.truncate(size);
    pool.sort_unstable();
    pool
}

fn delta_vs_oracle(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut checked = 0;
    while checked < 100 {
        let (b1, b2) = (random_exponents(rng), random_exponents(rng));
        if gcd_all(&[b1.as_slice(), b2.as_slice()].concat()) != 1 {
            continue;
        }
        let (s1, s2) = (ints(&b1), ints(&b2));
        let formula = delta_sparse(&s1, &s2, Rescale::Forbid).map_err(|e| e.to_string())?.delta;
        let (f1, f2) = random_nondegenerate(&s1, &s2, rng).map_err(|e| e.to_string())?;
        let oracle = delta_oracle(&f1, &f2).map_err(|e| e.to_string())?;
        ensure(oracle == Multiplicity::Finite(formula), || {
            format!("B = ({b1:?}, {b2:?}): formula {formula}, oracle {oracle:?}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} random pairs agree"))
}

fn strict_excess(_: &mut ChaCha8Rng) -> Result<String, String> {
    let instances = [
        (2, 4, 1, 1),
        (2, 4, 1, 2),
        (2, 4, 3, 1),
        (2, 6, 1, 1),
        (2, 6, 3, -1),
        (4, 6, 1, 1),
        (4, 6, 3, 2),
        (3, 6, 1, 1),
        (3, 6, 2, 1),
        (6, 9, 1, 1),
        (4, 8, 1, -1),
        (6, 4, 1, 3),
    ];
    for &(d1, d2, r, ratio) in &instances {
        let (f1, f2) = degenerate_pair(d1, d2, r, ratio).map_err(|e| e.to_string())?;
        let formula = delta_sparse(f1.support(), f2.support(), Rescale::Forbid).map_err(|e| e.to_string())?.delta;
        let oracle = delta_oracle(&f1, &f2).map_err(|e| e.to_string())?;
        ensure(matches!(oracle, Multiplicity::Finite(o) if o > formula), || {
            format!("(d1, d2, r, ratio) = ({d1}, {d2}, {r}, {ratio}): formula {formula}, oracle {oracle:?}")
        })?;
    }
    Ok(format!("{} degenerate instances exceed the formula", instances.len()))
}

fn unit_lift_hulls(h1: i64, h2: i64) -> (LatticePolytope, LatticePolytope) {
    let p = LatticePolytope::from_lattice_points(&[vec![0, 0, 0], vec![h1, 0, 0], vec![0, 1, 0]]).expect("triangle");
    let q = LatticePolytope::from_lattice_points(&[vec![0, 0, 0], vec![h2, 0, 0], vec![0, 0, 1]]).expect("triangle");
    (p, q)
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn unit_lift_mfp(_: &mut ChaCha8Rng) -> Result<String, String> {
    for (h1, h2) in [(2, 3), (3, 4), (4, 7)] {
        let (p, q) = unit_lift_hulls(h1, h2);
        let m = mixed_fiber_polygon(&p, &q, 0).map_err(|e| e.to_string())?.normalized();
        let expected = Polygon::hull(&[[int(0), int(0)], [int(0), int(h1)], [int(h2), int(0)]]).expect("triangle");
        ensure(m == expected, || format!("h = ({h1}, {h2}): got {:?}", m.vertices()))?;
    }
    Ok("three triangles reproduced".into())
}

fn random_full_polytope(rng: &mut ChaCha8Rng, bound: i64) -> LatticePolytope {
    loop {
        let n = rng.gen_range(4..=7);
        let pts: Vec<Vec<i64>> = (0..n).map(|_| (0..3).map(|_| rng.gen_range(0..=bound)).collect()).collect();
        if let Ok(p) = LatticePolytope::from_lattice_points(&pts) {
            if p.adim() == 3 {
                return p;
            }
        }
    }
}

fn area_identity(p: &LatticePolytope, q: &LatticePolytope) -> Result<(Rational, u64), String> {
    let area = mixed_fiber_polygon(p, q, 0).map_err(|e| e.to_string())?.lattice_area();
    let mv = doubled_mixed_volume(p, q).map_err(|e| e.to_string())?;
    Ok((area, mv))
}

fn fib_area(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for (h1, h2) in [(2, 3), (3, 4), (4, 7), (2, 5), (5, 3)] {
        let (p, q) = unit_lift_hulls(h1, h2);
        let (area, mv) = area_identity(&p, &q)?;
        ensure(area == int(mv as i64), || format!("unit lift h = ({h1}, {h2}): area {area}, MV {mv}"))?;
    }
    for i in 0..20 {
        let (p, q) = (random_full_polytope(rng, 4), random_full_polytope(rng, 4));
        let (area, mv) = area_identity(&p, &q)?;
        ensure(area == int(mv as i64), || format!("random pair {i}: area {area}, MV {mv}"))?;
    }
    Ok("5 unit-lift pairs and 20 random pairs".into())
}

fn unit_lift(b1: &[i64], b2: &[i64]) -> (SupportSet, SupportSet) {
    (lift_with_unit(&ints(b1), 0), lift_with_unit(&ints(b2), 1))
}

fn thsum_ground_truth(_: &mut ChaCha8Rng) -> Result<String, String> {
    for (b1, b2, expected) in [(&[0, 2][..], &[0, 3][..], 1), (&[0, 2], &[0, 5], 2)] {
        let (a1, a2) = unit_lift(b1, b2);
        let r = thsum_report(&a1, &a2).map_err(|e| e.to_string())?;
        ensure(r.total == expected, || format!("({b1:?}, {b2:?}): total {} under {:?}", r.total, r.convention))?;
    }
    Ok("totals 1 and 2".into())
}

fn lemma_3x3(_: &mut ChaCha8Rng) -> Result<String, String> {
    let r = check_3x3_lemma(12, 10);
    ensure(r.counterexamples.is_empty(), || format!("{} counterexamples, first {:?}", r.counterexamples.len(), r.counterexamples[0]))?;
    Ok(format!("{} matrices, {} degenerate, none exceptional", r.checked, r.degenerate))
}

const DUALITY_CASES: [(&[i64], &[i64]); 3] = [(&[0, 1, 2], &[0, 4]), (&[0, 2, 3], &[0, 1]), (&[0, 1, 2], &[0, 1, 2])];

fn strata_census_duality(_: &mut ChaCha8Rng) -> Result<String, String> {
    let (mut compared, mut unknown) = (0, Vec::new());
    for (b1, b2) in DUALITY_CASES {
        let (s1, s2) = (ints(b1), ints(b2));
        let report = strata_report(&s1, &s2, false).map_err(|e| e.to_string())?;
        let census = standard_triangle_census(&s1, &s2).map_err(|e| e.to_string())?;
        for stratum in &report {
            let counted = match stratum.name {
                StratumName::S1 => census.nodes,
                name => census.entries.iter().filter(|e| e.stratum == name).map(|e| e.count).sum(),
            };
            let Degree::Known(degree) = stratum.degree else {
                unknown.push(format!("{} of ({b1:?}, {b2:?})", stratum.name));
                continue;
            };
            ensure(degree == counted, || format!("({b1:?}, {b2:?}) {}: degree {degree}, census {counted}", stratum.name))?;
            compared += 1;
        }
    }
    if unknown.is_empty() {
        Ok(format!("{compared} strata match"))
    } else {
        Ok(format!("{compared} strata match; no degree emitted for {}", unknown.join(", ")))
    }
}

fn property_suites(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mv = mixed_volume_properties(rng)?;
    let fulton = fulton_axioms(rng)?;
    let blocks = ultrametric_blocks()?;
    let mfp = mfp_defining_property(rng)?;
    Ok(format!("{mv} MV triples, {fulton} Fulton pairs, {blocks} blocks ultrametric, {mfp} MFP triples"))
}

fn mv3(ps: [&LatticePolytope; 3]) -> Result<u64, String> {
    mixed_volume(&ps.map(Clone::clone)).map_err(|e| e.to_string())
}

fn mixed_volume_properties(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let n = 50;
    for i in 0..n {
        let [p, p2, q, r] = [(); 4].map(|_| random_full_polytope(rng, 3));
        let base = mv3([&p, &q, &r])?;
        let sum = minkowski_sum(&p, &p2).map_err(|e| e.to_string())?;
        let additive = mv3([&sum, &q, &r])? == base + mv3([&p2, &q, &r])?;
        let symmetric = [[&q, &p, &r], [&r, &q, &p], [&q, &r, &p]].into_iter().all(|t| mv3(t) == Ok(base));
        let shift: Vec<Rational> = (0..3).map(|_| int(rng.gen_range(-5..=5))).collect();
        let moved = p.translate(&shift).map_err(|e| e.to_string())?;
        let translated = mv3([&moved, &q, &r])? == base;
        ensure(additive && symmetric && translated, || {
            format!("triple {i}: additive {additive}, symmetric {symmetric}, translation {translated}")
        })?;
    }
    Ok(n)
}

fn random_bivariate(rng: &mut ChaCha8Rng) -> SparsePoly {
    let terms: Vec<(Vec<u32>, Rational)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut e = vec![rng.gen_range(0..=2u32), rng.gen_range(0..=2u32)];
            if e == [0, 0] {
                e[rng.gen_range(0..2)] = 1;
            }
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-3..=3i64);
            }
            (e, int(c))
        })
        .collect();
    let p = SparsePoly::from_terms(2, terms);
    if p.is_zero() {
        SparsePoly::var(2, 0)
    } else {
        p
    }
}

fn add_multiplicities(a: Multiplicity, b: Multiplicity) -> Multiplicity {
    match (a, b) {
        (Multiplicity::Finite(x), Multiplicity::Finite(y)) => Multiplicity::Finite(x + y),
        _ => Multiplicity::Infinite,
    }
}

fn fulton_axioms(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let (t1, t2) = (SparsePoly::var(2, 0), SparsePoly::var(2, 1));
    ensure(fulton_intersection_number(&t1, &t2) == Multiplicity::Finite(1), || "I(t1, t2) != 1".into())?;
    let n = 50;
    for i in 0..n {
        let (f, g, h, a) = (random_bivariate(rng), random_bivariate(rng), random_bivariate(rng), random_bivariate(rng));
        let c = if rng.gen_bool(0.5) { SparsePoly::one(2) } else { a.clone() };
        let i_fg = fulton_intersection_number(&f, &g);
        let symmetric = fulton_intersection_number(&g, &f) == i_fg;
        let additive = fulton_intersection_number(&f, &(&g * &h)) == add_multiplicities(i_fg, fulton_intersection_number(&f, &h));
        let reduced = &g + &(&c * &f);
        let row_reduction = reduced.is_zero() || fulton_intersection_number(&f, &reduced) == i_fg;
        ensure(symmetric && additive && row_reduction, || {
            format!("pair {i}: symmetry {symmetric}, additivity {additive}, row reduction {row_reduction}")
        })?;
    }
    Ok(n)
}

/// `κ(p, r) >= min(κ(p, q), κ(q, r))` on distinct triples of every block.
fn ultrametric(m: &TangencyMatrix) -> bool {
    m.blocks.iter().all(|b| {
        let e = &b.entries;
        let n = e.len();
        (0..n).all(|p| {
            (0..n).all(|q| (0..n).all(|r| p == q || q == r || p == r || e[p][r] >= e[p][q].min(e[q][r])))
        })
    })
}

fn ultrametric_blocks() -> Result<usize, String> {
    let mut matrices = Vec::new();
    for (b1, b2) in [(&[0, 2][..], &[0, 3][..]), (&[0, 2], &[0, 5])] {
        let (a1, a2) = unit_lift(b1, b2);
        matrices.extend(thsum_report(&a1, &a2).map_err(|e| e.to_string())?.matrices);
    }
    for (b1, b2) in DUALITY_CASES {
        let (a1, a2) = (times_standard_triangle(&ints(b1)), times_standard_triangle(&ints(b2)));
        matrices.extend(census_with_report(&a1, &a2).map_err(|e| e.to_string())?.1.matrices);
    }
    let blocks = matrices.iter().map(|m| m.blocks.len()).sum();
    ensure(blocks > 0, || "no blocks produced".into())?;
    ensure(matrices.iter().all(ultrametric), || "a block violates the ultrametric inequality".into())?;
    Ok(blocks)
}

fn mfp_defining_property(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let n = 20;
    for i in 0..n {
        let (p, q) = (random_full_polytope(rng, 3), random_full_polytope(rng, 3));
        let m = mixed_fiber_polygon(&p, &q, 0).map_err(|e| e.to_string())?;
        let (sx, sy) = loop {
            let s = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if s != (0, 0) {
                break s;
            }
        };
        let segment = LatticePolytope::from_lattice_points(&[vec![0, 0, 0], vec![0, sx, sy]]).expect("segment");
        let flat = Polygon::hull(&[[int(0), int(0)], [int(sx), int(sy)]]).expect("segment");
        let lhs = int(mv3([&p, &q, &segment])? as i64);
        let rhs = mixed_area(&m, &flat) * int(MFP_PAIRING_SCALE);
        ensure(lhs == rhs, || format!("triple {i}, s = ({sx}, {sy}): MV3 {lhs}, MV2 {rhs}"))?;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_line_format() {
        let o = Outcome { id: 3, title: "t", passed: true, detail: "d".into(), elapsed_ms: 1, budget_ms: 1000 };
        assert_eq!(o.to_string(), "[PASS] criterion 3: t (1 ms of 1000 ms) d");
    }

    #[test]
    fn unknown_criterion() {
        assert!(run(9, 0).is_none());
        assert_eq!(criterion_ids().collect::<Vec<_>>(), (1..=8).collect::<Vec<_>>());
    }
}
