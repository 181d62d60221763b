//! Local intersection multiplicity at the origin of two plane curves, by the
//! classical reduction, and the divided differences that feed it.

use num_traits::Zero;

use super::jet;
use super::sparse::SparsePoly;
use super::univariate::UniPoly;
use super::Multiplicity;
use crate::Rational;

/// `(f(t2) - f(t1)) / (t2 - t1)` for univariate `f`, in variables `(t1, t2)`.
pub fn divided_difference(f: &SparsePoly) -> SparsePoly {
    assert_eq!(f.nvars(), 1, "divided differences take a univariate polynomial");
    let terms = f.terms().flat_map(|(e, c)| {
        let b = e[0];
        (0..b).map(move |p| (vec![p, b - 1 - p], c.clone()))
    });
    SparsePoly::from_terms(2, terms)
}

/// Coefficients in `t2` over `Q[t1]`, lowest first.
fn to_rows(f: &SparsePoly) -> Vec<UniPoly> {
    let top = f.degree_in(1).map_or(0, |d| d as usize + 1);
    let mut rows = vec![Vec::<Rational>::new(); top];
    for (e, c) in f.terms() {
        let row = &mut rows[e[1] as usize];
        if row.len() <= e[0] as usize {
            row.resize(e[0] as usize + 1, Rational::zero());
        }
        row[e[0] as usize] = c.clone();
    }
    rows.into_iter().map(UniPoly::new).collect()
}

fn from_rows(rows: &[UniPoly]) -> SparsePoly {
    let terms = rows.iter().enumerate().flat_map(|(j, r)| {
        r.coeffs().iter().enumerate().map(move |(i, c)| (vec![i as u32, j as u32], c.clone()))
    });
    SparsePoly::from_terms(2, terms)
}

fn trim(mut rows: Vec<UniPoly>) -> Vec<UniPoly> {
    while rows.last().is_some_and(UniPoly::is_zero) {
        rows.pop();
    }
    rows
}

fn content(rows: &[UniPoly]) -> UniPoly {
    rows.iter().fold(UniPoly::zero(), |g, r| g.gcd(r))
}

/// Divides out the polynomial content, then scales to coprime integer coefficients.
fn primitive_part(rows: &[UniPoly]) -> Vec<UniPoly> {
    let c = content(rows);
    let prim: Vec<UniPoly> = rows.iter().map(|r| r.div_rem(&c).0).collect();
    let scaled = from_rows(&prim).primitive_integer();
    let mut out = to_rows(&scaled);
    out.resize(rows.len(), UniPoly::zero());
    trim(out)
}

/// Pseudo-remainder of `a` by `b` as polynomials in `t2`.
fn pseudo_rem(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let mut a = trim(a.to_vec());
    let db = b.len() - 1;
    let lb = b[db].clone();
    while a.len() > db {
        let da = a.len() - 1;
        let la = a[da].clone();
        let shift = da - db;
        let mut next: Vec<UniPoly> = a.iter().map(|r| &lb * r).collect();
        for (i, r) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(&la * r);
        }
        a = trim(next);
    }
    a
}

/// Greatest common divisor in `Q[t1, t2]`, normalized by [`SparsePoly::primitive_integer`].
pub fn bivariate_gcd(f: &SparsePoly, g: &SparsePoly) -> SparsePoly {
    if f.is_zero() {
        return g.primitive_integer();
    }
    if g.is_zero() {
        return f.primitive_integer();
    }
    let (fa, ga) = (to_rows(f), to_rows(g));
    let c = content(&fa).gcd(&content(&ga));
    let (mut a, mut b) = (primitive_part(&fa), primitive_part(&ga));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while b.len() > 1 {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { primitive_part(&r) };
    }
    // `b` constant and nonzero means the primitive parts are coprime.
    let prim = if b.is_empty() { a } else { vec![UniPoly::one()] };
    let out: Vec<UniPoly> = prim.iter().map(|r| &c * r).collect();
    from_rows(&out).primitive_integer()
}

/// `true` proves `gcd(f, g) = 1`. A common factor `D` of positive `t2`-degree
/// would survive every specialization `t1 = a` with nonvanishing leading
/// coefficients, so one specialization with trivial gcd rules it out; factors
/// free of `t2` divide both contents.
fn certified_coprime(f: &SparsePoly, g: &SparsePoly) -> bool {
    let (fa, ga) = (to_rows(f), to_rows(g));
    if content(&fa).gcd(&content(&ga)).degree() != Some(0) {
        return false;
    }
    if fa.len() == 1 || ga.len() == 1 {
        return true;
    }
    let (lf, lg) = (fa.last().unwrap(), ga.last().unwrap());
    (0..32).map(|a| Rational::from_integer(a.into())).any(|a| {
        if lf.eval(&a).is_zero() || lg.eval(&a).is_zero() {
            return false;
        }
        let fs = UniPoly::new(fa.iter().map(|r| r.eval(&a)).collect());
        let gs = UniPoly::new(ga.iter().map(|r| r.eval(&a)).collect());
        fs.gcd(&gs).degree() == Some(0)
    })
}

fn vanishes_at_origin(f: &SparsePoly) -> bool {
    f.constant_term().is_zero()
}

/// Local intersection multiplicity `I_0(F, G)` in variables `(t1, t2)`.
pub fn fulton_intersection_number(f: &SparsePoly, g: &SparsePoly) -> Multiplicity {
    assert!(f.nvars() == 2 && g.nvars() == 2, "intersection numbers are planar");
    if f.is_zero() || g.is_zero() {
        return Multiplicity::Infinite;
    }
    if !vanishes_at_origin(f) || !vanishes_at_origin(g) {
        return Multiplicity::Finite(0);
    }
    let (mut f, mut g) = (f.clone(), g.clone());
    if !certified_coprime(&f, &g) {
        let d = bivariate_gcd(&f, &g);
        if vanishes_at_origin(&d) {
            return Multiplicity::Infinite;
        }
        // A common factor through no point near 0 is a local unit.
        if d.total_degree() > Some(0) {
            f = f.div_exact(&d).expect("gcd divides");
            g = g.div_exact(&d).expect("gcd divides");
        }
    }
    // For coprime F, G Bezout bounds I; jets of a level at least I carry the
    // whole local ideal, so the budget doubles until the answer fits.
    let bezout = f.total_degree().unwrap() * g.total_degree().unwrap();
    let mut budget = bezout.min(16);
    loop {
        if let Some(i) = jet::reduce(&f, &g, budget) {
            return Multiplicity::Finite(u64::from(i));
        }
        assert!(budget < bezout, "intersection number exceeds the Bezout bound");
        budget = (budget * 2).min(bezout);
    }
}

/// Polynomial with the given univariate support in `t`, for tests and oracles.
pub fn univariate_from(pairs: &[(u32, i64)]) -> SparsePoly {
    SparsePoly::univariate(pairs.iter().map(|&(e, c)| (e, Rational::from_integer(c.into()))))
}
