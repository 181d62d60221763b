//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::Rational;

pub type Exponent = Vec<u32>;

/// A polynomial in `nvars` variables; no zero coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn monomial(c: Rational, exponent: Exponent) -> Self {
        let mut p = SparsePoly::zero(exponent.len());
        if !c.is_zero() {
            p.terms.insert(exponent, c);
        }
        p
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Rational::one(), e)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = SparsePoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must equal nvars");
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from `(exponent, coefficient)` pairs.
    pub fn univariate(terms: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        Self::from_terms(1, terms.into_iter().map(|(e, c)| (vec![e], c)))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Degree in variable `i`; `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Lowest power of `x_i` present; `None` for the zero polynomial.
    pub fn order_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    /// Coefficient of `x_i^k`, as a polynomial in the same variables.
    pub fn coefficient_in(&self, i: usize, k: u32) -> SparsePoly {
        let mut p = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut f = e.clone();
                f[i] = 0;
                p.terms.insert(f, c.clone());
            }
        }
        p
    }

    /// Substitutes `x_i = 0`.
    pub fn at_zero(&self, i: usize) -> SparsePoly {
        self.coefficient_in(i, 0)
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[u32]) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.iter().zip(shift).map(|(x, y)| x + y).collect(), a.clone()))
                .collect(),
        }
    }

    /// Divides by `x_i^k`; every term must contain it.
    pub fn unshift(&self, i: usize, k: u32) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| {
                    let mut f = e.clone();
                    f[i] = f[i].checked_sub(k).expect("monomial factor divides every term");
                    (f, a.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        (0..k).fold(SparsePoly::one(self.nvars), |acc, _| &acc * self)
    }

    /// Drops every term of total degree above `degree`.
    pub fn truncate(&self, degree: u32) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() <= degree).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Lex-largest term.
    pub fn leading_term(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Replaces `x_i` by the polynomial `q`.
    pub fn substitute(&self, i: usize, q: &SparsePoly) -> SparsePoly {
        let top = self.degree_in(i).unwrap_or(0);
        let powers: Vec<SparsePoly> =
            std::iter::successors(Some(SparsePoly::one(self.nvars)), |p| Some(p * q)).take(top as usize + 1).collect();
        let mut out = SparsePoly::zero(self.nvars);
        for k in 0..=top {
            let c = self.coefficient_in(i, k);
            if !c.is_zero() {
                out = &out + &(&c * &powers[k as usize]);
            }
        }
        out
    }

    /// Reinterprets the polynomial in a larger number of variables, mapping
    /// old variable `j` to new variable `map[j]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> SparsePoly {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut f = vec![0; nvars];
            for (j, &k) in e.iter().enumerate() {
                f[map[j]] += k;
            }
            (f, c.clone())
        });
        SparsePoly::from_terms(nvars, terms)
    }

    /// Exact quotient by lex-leading-term division; `None` if `d` does not divide.
    pub fn div_exact(&self, d: &SparsePoly) -> Option<SparsePoly> {
        let (de, dc) = d.leading_term()?;
        let mut rem = self.clone();
        let mut quo = SparsePoly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exponent = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let c = rc / dc;
            let t = SparsePoly::monomial(c, e);
            rem = &rem - &(&t * d);
            quo = &quo + &t;
        }
        Some(quo)
    }

    /// Multiplies through by a positive rational so the coefficients are
    /// coprime integers with positive leading coefficient.
    pub fn primitive_integer(&self) -> SparsePoly {
        use num_integer::Integer;
        let Some((_, lc)) = self.leading_term() else {
            return self.clone();
        };
        let den = self.terms.values().fold(num_bigint::BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = self.terms.values().fold(num_bigint::BigInt::zero(), |g, c| g.gcd(&(c.numer() * &den / c.denom())));
        let mut f = Rational::new(den, num);
        if lc.is_negative() {
            f = -f;
        }
        self.scale(&f)
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = SparsePoly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.iter().zip(b).map(|(i, j)| i + j).collect(), x * y);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let sep = if n == 0 {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            write!(f, "{sep}")?;
            match (a.is_one(), mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", mono.join("*"))?,
                (false, true) => write!(f, "{a}")?,
                (false, false) => write!(f, "{a}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn arithmetic_cancels() {
        let x = SparsePoly::var(2, 0);
        let y = SparsePoly::var(2, 1);
        let s = &x + &y;
        let d = &x - &y;
        let p = &s * &d;
        assert_eq!(p, &x.pow(2) - &y.pow(2));
        assert!((&p - &p).is_zero());
        assert_eq!(p.to_string(), "x0^2 - x1^2");
    }

    #[test]
    fn exact_division() {
        let x = SparsePoly::var(3, 0);
        let y = SparsePoly::var(3, 1);
        let z = SparsePoly::var(3, 2);
        let a = &(&x - &y) * &(&y + &z.scale(&q(3)));
        assert_eq!(a.div_exact(&(&x - &y)).unwrap(), &y + &z.scale(&q(3)));
        assert!(a.div_exact(&(&x + &y)).is_none());
    }

    #[test]
    fn substitution_and_restriction() {
        let x = SparsePoly::var(2, 0);
        let y = SparsePoly::var(2, 1);
        let f = &(&y - &x.pow(2)) * &y;
        assert!(f.at_zero(1).is_zero());
        assert_eq!(f.order_in(1), Some(1));
        let g = f.substitute(1, &x.pow(2));
        assert!(g.is_zero());
        assert_eq!(f.evaluate(&[q(2), q(5)]), q(5));
    }

    #[test]
    fn primitive_integer_normalizes() {
        let p = SparsePoly::univariate([(0, Rational::new((-2).into(), 3.into())), (1, Rational::new((-4).into(), 9.into()))]);
        assert_eq!(p.primitive_integer(), SparsePoly::univariate([(0, q(3)), (1, q(2))]));
    }
}
