//! The δ-invariant of sparse plane curve germs `t ↦ (f1(t), f2(t))`: the
//! closed form through the j-sequence, the 0-nondegeneracy test, and the
//! intersection-number oracle it is checked against.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{LatticeError, SupportSet};
use crate::poly::{divided_difference, fulton_intersection_number, Multiplicity, SparsePoly};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeltaError {
    #[error("support sets must be one-dimensional")]
    NotOneDimensional,
    #[error("support {0} has no positive exponent")]
    NoPositiveExponent(String),
    #[error("negative exponent in support {0}")]
    NegativeExponent(String),
    #[error("gcd of all exponents is {gcd}, so the germ is not injective")]
    NotInjective { gcd: u64 },
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("no 0-nondegenerate coefficients found in {retries} draws")]
    SamplingExhausted { retries: usize },
    #[error("odd intersection number {0} of the divided differences")]
    OddIntersection(u64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Whether a common factor of all exponents is divided out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rescale {
    Auto,
    Forbid,
}

/// Positive exponents of a one-dimensional support, sorted.
fn positive_exponents(b: &SupportSet) -> Result<Vec<u64>, DeltaError> {
    if b.dim() != 1 {
        return Err(DeltaError::NotOneDimensional);
    }
    let vals = b.values();
    if vals.iter().any(|&v| v < 0) {
        return Err(DeltaError::NegativeExponent(b.to_string()));
    }
    let pos: Vec<u64> = vals.into_iter().filter(|&v| v > 0).map(|v| v as u64).collect();
    if pos.is_empty() {
        return Err(DeltaError::NoPositiveExponent(b.to_string()));
    }
    Ok(pos)
}

/// The pair of exponent lists after dropping 0 and the optional rescale.
fn normalized_pair(b1: &SupportSet, b2: &SupportSet, rescale: Rescale) -> Result<[Vec<u64>; 2], DeltaError> {
    let (p1, p2) = (positive_exponents(b1)?, positive_exponents(b2)?);
    let g = p1.iter().chain(&p2).fold(0u64, |g, &v| g.gcd(&v));
    if g == 1 {
        return Ok([p1, p2]);
    }
    match rescale {
        Rescale::Forbid => Err(DeltaError::NotInjective { gcd: g }),
        Rescale::Auto => Ok([p1, p2].map(|p| p.into_iter().map(|v| v / g).collect())),
    }
}

fn j_sequence_of(sets: &[Vec<u64>; 2]) -> Vec<u64> {
    let d = [sets[0][0], sets[1][0]];
    let mut seq = Vec::new();
    for r in 0.. {
        let j = sets
            .iter()
            .zip(d)
            .flat_map(|(s, di)| s.iter().filter(move |&&b| b <= di + r))
            .fold(0u64, |g, &b| g.gcd(&b));
        seq.push(j);
        if j == 1 {
            return seq;
        }
    }
    unreachable!("gcd of all exponents is 1")
}

/// `j_r = gcd` of the exponents within `r` of each minimum, up to the first 1.
pub fn j_sequence(b1: &SupportSet, b2: &SupportSet, rescale: Rescale) -> Result<Vec<u64>, DeltaError> {
    Ok(j_sequence_of(&normalized_pair(b1, b2, rescale)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaResult {
    pub delta: u64,
    pub milnor: u64,
    pub d1: u64,
    pub d2: u64,
    pub j_sequence: Vec<u64>,
}

/// `δ = ((d1-1)(d2-1) + Σ (j_r - 1)) / 2` for generic germs with these supports.
pub fn delta_sparse(b1: &SupportSet, b2: &SupportSet, rescale: Rescale) -> Result<DeltaResult, DeltaError> {
    let sets = normalized_pair(b1, b2, rescale)?;
    let (d1, d2) = (sets[0][0], sets[1][0]);
    let j = j_sequence_of(&sets);
    let twice = (d1 - 1) * (d2 - 1) + j.iter().map(|x| x - 1).sum::<u64>();
    debug_assert!(twice % 2 == 0, "twice δ is even");
    Ok(DeltaResult { delta: twice / 2, milnor: twice, d1, d2, j_sequence: j })
}

/// `f(t) = Σ c_b t^b` over a support `B`; coefficients off the map read as 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Germ {
    support: SupportSet,
    coeffs: BTreeMap<u64, Rational>,
}

impl Germ {
    pub fn new(support: SupportSet, coeffs: BTreeMap<u64, Rational>) -> Result<Self, DeltaError> {
        positive_exponents(&support)?;
        if let Some(b) = coeffs.keys().find(|&&b| !support.contains(&[b as i64])) {
            return Err(DeltaError::InvalidSupport(format!("coefficient at {b} outside {support}")));
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Germ { support, coeffs })
    }

    /// A germ whose support is exactly the keys of `coeffs`.
    pub fn from_coefficients(coeffs: &[(u64, i64)]) -> Result<Self, DeltaError> {
        let support = SupportSet::from_ints(&coeffs.iter().map(|&(b, _)| b as i64).collect::<Vec<_>>())?;
        Germ::new(support, coeffs.iter().map(|&(b, c)| (b, Rational::from_integer(c.into()))).collect())
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn coefficient(&self, b: u64) -> Rational {
        self.coeffs.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    /// Smallest positive exponent of the support.
    pub fn order(&self) -> u64 {
        positive_exponents(&self.support).expect("validated")[0]
    }

    /// Univariate polynomial without its constant term.
    pub fn polynomial(&self) -> SparsePoly {
        SparsePoly::univariate(self.coeffs.iter().filter(|(&b, _)| b > 0).map(|(&b, c)| (b as u32, c.clone())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Nondegeneracy {
    pub nondegenerate: bool,
    /// A common divisor `k > 1` of `d1, d2` at which the ratios coincide.
    pub witness: Option<u64>,
}

/// For every common divisor `k > 1` of `d1, d2`, with `r_k` the least shift
/// off `kZ`, the ratios `c_{i, d_i + r_k} / (c_{i, d_i} d_i)` must differ.
pub fn is_zero_nondegenerate(f1: &Germ, f2: &Germ) -> Result<Nondegeneracy, DeltaError> {
    let germs = [f1, f2];
    let d = germs.map(Germ::order);
    for (f, di) in germs.iter().zip(d) {
        if f.coefficient(di).is_zero() {
            return Err(DeltaError::InvalidSupport(format!("leading coefficient at {di} vanishes")));
        }
    }
    let shifts: Vec<u64> = germs
        .iter()
        .zip(d)
        .flat_map(|(f, di)| positive_exponents(&f.support).expect("validated").into_iter().map(move |b| b - di))
        .collect();
    let g = d[0].gcd(&d[1]);
    for k in (2..=g).filter(|k| g % k == 0) {
        let Some(r) = shifts.iter().copied().filter(|s| s % k != 0).min() else {
            let all = shifts.iter().fold(g, |a, &s| a.gcd(&s));
            return Err(DeltaError::NotInjective { gcd: all });
        };
        let ratio = |f: &Germ, di: u64| f.coefficient(di + r) / (f.coefficient(di) * Rational::from_integer(di.into()));
        if ratio(f1, d[0]) == ratio(f2, d[1]) {
            return Ok(Nondegeneracy { nondegenerate: false, witness: Some(k) });
        }
    }
    Ok(Nondegeneracy { nondegenerate: true, witness: None })
}

/// δ as half the local intersection number of the two divided differences.
pub fn delta_oracle(f1: &Germ, f2: &Germ) -> Result<Multiplicity, DeltaError> {
    let (a, b) = (divided_difference(&f1.polynomial()), divided_difference(&f2.polynomial()));
    match fulton_intersection_number(&a, &b) {
        Multiplicity::Finite(i) if i % 2 == 1 => Err(DeltaError::OddIntersection(i)),
        Multiplicity::Finite(i) => Ok(Multiplicity::Finite(i / 2)),
        Multiplicity::Infinite => Ok(Multiplicity::Infinite),
    }
}

pub const SAMPLING_RETRIES: usize = 100;
pub const COEFFICIENT_BOUND: i64 = 50;

fn random_germ<R: Rng>(b: &SupportSet, rng: &mut R) -> Result<Germ, DeltaError> {
    let coeffs = positive_exponents(b)?
        .into_iter()
        .map(|e| {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-COEFFICIENT_BOUND..=COEFFICIENT_BOUND);
            }
            (e, Rational::from_integer(c.into()))
        })
        .collect();
    Germ::new(b.clone(), coeffs)
}

/// Nonzero integer coefficients in `[-50, 50]` on every positive exponent,
/// redrawn until 0-nondegenerate.
pub fn random_nondegenerate<R: Rng>(b1: &SupportSet, b2: &SupportSet, rng: &mut R) -> Result<(Germ, Germ), DeltaError> {
    for _ in 0..SAMPLING_RETRIES {
        let (f1, f2) = (random_germ(b1, rng)?, random_germ(b2, rng)?);
        if is_zero_nondegenerate(&f1, &f2)?.nondegenerate {
            return Ok((f1, f2));
        }
    }
    Err(DeltaError::SamplingExhausted { retries: SAMPLING_RETRIES })
}

/// A 0-degenerate pair: the ratios at `k = gcd(d1, d2)` agree by construction.
/// Needs `k > 1`, the shift `r` off `kZ`, and no other exponent below `d_i + r`
/// off `kZ`.
pub fn degenerate_pair(d1: u64, d2: u64, r: u64, ratio: i64) -> Result<(Germ, Germ), DeltaError> {
    let k = d1.gcd(&d2);
    if k < 2 || r.is_multiple_of(k) || ratio == 0 {
        return Err(DeltaError::InvalidSupport(format!("no degenerate pair for d = ({d1}, {d2}), r = {r}")));
    }
    let f1 = Germ::from_coefficients(&[(d1, 1), (d1 + r, ratio * d1 as i64)])?;
    let f2 = Germ::from_coefficients(&[(d2, 1), (d2 + r, ratio * d2 as i64)])?;
    debug_assert!(!is_zero_nondegenerate(&f1, &f2)?.nondegenerate);
    Ok((f1, f2))
}

impl DeltaResult {
    /// Lower bound `(d1-1)(d2-1)/2`, attained iff `j_0 = 1`.
    pub fn transversal_part(&self) -> Rational {
        Rational::new(((self.d1 - 1) * (self.d2 - 1)).into(), 2.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> SupportSet {
        SupportSet::from_ints(v).unwrap()
    }

    #[test]
    fn j_sequence_examples() {
        assert_eq!(j_sequence(&s(&[4]), &s(&[6, 7]), Rescale::Auto).unwrap(), vec![2, 1]);
        assert_eq!(j_sequence(&s(&[2]), &s(&[3]), Rescale::Auto).unwrap(), vec![1]);
        assert_eq!(j_sequence(&s(&[6]), &s(&[4]), Rescale::Auto).unwrap(), vec![1]);
        assert_eq!(j_sequence(&s(&[6]), &s(&[4]), Rescale::Forbid), Err(DeltaError::NotInjective { gcd: 2 }));
    }

    #[test]
    fn delta_examples() {
        let cusp = delta_sparse(&s(&[2]), &s(&[3]), Rescale::Auto).unwrap();
        assert_eq!((cusp.delta, cusp.milnor), (1, 2));
        assert_eq!(delta_sparse(&s(&[1]), &s(&[7]), Rescale::Auto).unwrap().delta, 0);
        assert_eq!(delta_sparse(&s(&[4]), &s(&[6, 7]), Rescale::Auto).unwrap().delta, 8);
        assert_eq!(delta_sparse(&s(&[0, 2]), &s(&[0, 4, 5]), Rescale::Auto).unwrap().delta, 2);
    }

    #[test]
    fn oracle_examples() {
        let f = |c: &[(u64, i64)]| Germ::from_coefficients(c).unwrap();
        assert_eq!(delta_oracle(&f(&[(2, 1)]), &f(&[(3, 1)])).unwrap(), Multiplicity::Finite(1));
        assert_eq!(delta_oracle(&f(&[(2, 1)]), &f(&[(4, 1), (5, 1)])).unwrap(), Multiplicity::Finite(2));
        assert_eq!(delta_oracle(&f(&[(2, 1)]), &f(&[(4, 1)])).unwrap(), Multiplicity::Infinite);
    }

    #[test]
    fn vacuous_nondegeneracy() {
        let f1 = Germ::from_coefficients(&[(2, 3)]).unwrap();
        let f2 = Germ::from_coefficients(&[(3, -1)]).unwrap();
        assert_eq!(is_zero_nondegenerate(&f1, &f2).unwrap(), Nondegeneracy { nondegenerate: true, witness: None });
    }

    #[test]
    fn constructed_degeneracy_raises_delta() {
        let (f1, f2) = degenerate_pair(4, 6, 1, 1).unwrap();
        assert_eq!(is_zero_nondegenerate(&f1, &f2).unwrap().witness, Some(2));
        let formula = delta_sparse(f1.support(), f2.support(), Rescale::Auto).unwrap().delta;
        let oracle = delta_oracle(&f1, &f2).unwrap().finite().unwrap();
        assert!(oracle > formula, "oracle {oracle} formula {formula}");
    }

    #[test]
    fn zero_leading_coefficient_is_rejected() {
        let f1 = Germ::new(s(&[4, 5]), [(5, Rational::from_integer(1.into()))].into()).unwrap();
        let f2 = Germ::from_coefficients(&[(6, 1)]).unwrap();
        assert!(matches!(is_zero_nondegenerate(&f1, &f2), Err(DeltaError::InvalidSupport(_))));
    }

    #[test]
    fn random_instances_match_formula() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (b1, b2) in [(&[4][..], &[6, 7][..]), (&[2], &[3]), (&[2, 3], &[4, 5]), (&[6, 9], &[4, 10, 11])] {
            let (f1, f2) = random_nondegenerate(&s(b1), &s(b2), &mut rng).unwrap();
            let formula = delta_sparse(&s(b1), &s(b2), Rescale::Auto).unwrap().delta;
            assert_eq!(delta_oracle(&f1, &f2).unwrap(), Multiplicity::Finite(formula), "{b1:?} {b2:?}");
        }
    }
}
