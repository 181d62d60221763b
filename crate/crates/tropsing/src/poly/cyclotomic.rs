//! Arithmetic in cyclotomic fields `Q(ζ_N)`, elements kept reduced modulo `Φ_N`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::univariate::UniPoly;
use super::FieldElement;
use crate::Rational;

fn mobius(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

fn x_pow_minus_one(d: u64) -> UniPoly {
    &UniPoly::monomial(Rational::one(), d as usize) - &UniPoly::one()
}

/// `Φ_N = ∏_{d | N} (x^d - 1)^{μ(N/d)}`, cached per order.
pub fn cyclotomic_polynomial(n: u64) -> Arc<UniPoly> {
    assert!(n > 0, "cyclotomic order must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<UniPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cache lock").get(&n) {
        return Arc::clone(p);
    }
    let (mut num, mut den) = (UniPoly::one(), UniPoly::one());
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        match mobius(n / d) {
            1 => num = &num * &x_pow_minus_one(d),
            -1 => den = &den * &x_pow_minus_one(d),
            _ => {}
        }
    }
    let (phi, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    let phi = Arc::new(phi);
    cache.lock().expect("cache lock").entry(n).or_insert_with(|| Arc::clone(&phi));
    phi
}

/// An element of `Q(ζ_N)` as a polynomial in `ζ_N` of degree below `φ(N)`.
#[derive(Debug, Clone)]
pub struct CyclotomicElement {
    order: u64,
    rep: UniPoly,
}

impl CyclotomicElement {
    pub fn from_poly(order: u64, p: &UniPoly) -> Self {
        CyclotomicElement { order, rep: p.rem(&cyclotomic_polynomial(order)) }
    }

    pub fn rational(order: u64, q: Rational) -> Self {
        CyclotomicElement::from_poly(order, &UniPoly::constant(q))
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta_power(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        CyclotomicElement::from_poly(order, &UniPoly::monomial(Rational::one(), e))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rep(&self) -> &UniPoly {
        &self.rep
    }

    /// The same element viewed in `Q(ζ_M)` for a multiple `M` of the order.
    pub fn promote(&self, m: u64) -> Self {
        assert_eq!(m % self.order, 0, "promotion target must be a multiple of the order");
        if m == self.order {
            return self.clone();
        }
        CyclotomicElement::from_poly(m, &self.rep.inflate((m / self.order) as usize))
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.order.lcm(&other.order);
        (self.promote(m), other.promote(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        CyclotomicElement { order: a.order, rep: &a.rep + &b.rep }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        CyclotomicElement { order: a.order, rep: &a.rep - &b.rep }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        CyclotomicElement::from_poly(a.order, &(&a.rep * &b.rep))
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let phi = cyclotomic_polynomial(self.order);
        let (g, s) = self.rep.gcd_cofactor(&phi);
        debug_assert_eq!(g, UniPoly::one(), "Φ_N is irreducible");
        Some(CyclotomicElement::from_poly(self.order, &s))
    }
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.rep == b.rep
    }
}

impl Eq for CyclotomicElement {}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .rep
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                _ => format!("{c}*z{}^{k}", self.order),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FieldElement for CyclotomicElement {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn inverse(&self) -> Option<Self> {
        CyclotomicElement::inverse(self)
    }
}

/// Rank over `Q(ζ_N)`; entries are first promoted to the lcm of their orders.
pub fn cyclotomic_rank(m: &[Vec<CyclotomicElement>]) -> usize {
    let n = m.iter().flatten().fold(1u64, |l, e| l.lcm(&e.order));
    let promoted: Vec<Vec<CyclotomicElement>> = m.iter().map(|r| r.iter().map(|e| e.promote(n)).collect()).collect();
    super::rank(&promoted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> CyclotomicElement {
        CyclotomicElement::zeta_power(n, k)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), UniPoly::from_ints(&[-1, 1]));
        assert_eq!(*cyclotomic_polynomial(4), UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(*cyclotomic_polynomial(6), UniPoly::from_ints(&[1, -1, 1]));
        assert_eq!(*cyclotomic_polynomial(12), UniPoly::from_ints(&[1, 0, -1, 0, 1]));
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).degree(), Some(euler_phi(n) as usize));
        }
    }

    #[test]
    fn zeta_relations() {
        for n in [1, 2, 5, 9, 12] {
            assert_eq!(z(n, n as i64), CyclotomicElement::rational(n, Rational::one()));
            assert_eq!(z(n, 3).mul(&z(n, -3)), CyclotomicElement::rational(n, Rational::one()));
        }
        // ζ_6^2 = ζ_3
        assert_eq!(z(6, 2), z(3, 1));
        assert_eq!(z(4, 1).add(&z(4, 3)), CyclotomicElement::rational(4, Rational::zero()));
    }

    #[test]
    fn inverses() {
        let a = z(7, 1).add(&CyclotomicElement::rational(7, Rational::from_integer(3.into())));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), CyclotomicElement::rational(7, Rational::one()));
    }

    #[test]
    fn rank_examples() {
        let one = |n| CyclotomicElement::rational(n, Rational::one());
        let zero = |n| CyclotomicElement::rational(n, Rational::zero());
        let id = vec![vec![one(1), zero(1), zero(1)], vec![zero(1), one(1), zero(1)], vec![zero(1), zero(1), one(1)]];
        assert_eq!(cyclotomic_rank(&id), 3);
        let nodes = [0, 1, 2];
        let vdm: Vec<Vec<_>> = nodes.iter().map(|&e| (0..3).map(|j| z(5, e * j)).collect()).collect();
        assert_eq!(cyclotomic_rank(&vdm), 3);
        let rep: Vec<Vec<_>> = [1, 1, 2].iter().map(|&e| (0..3).map(|j| z(5, e * j)).collect()).collect();
        assert_eq!(cyclotomic_rank(&rep), 2);
    }
}
