//! Truncated bivariate integer polynomials: jets at the origin, used by the
//! local intersection reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::sparse::SparsePoly;

/// Coefficients `rows[j][i]` of `x^i y^j` with `i + j <= level`, primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Jet {
    level: u32,
    rows: Vec<Vec<BigInt>>,
}

impl Jet {
    /// The jet of `f` scaled to coprime integer coefficients.
    pub(crate) fn new(f: &SparsePoly, level: u32) -> Jet {
        assert_eq!(f.nvars(), 2);
        let den = f.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
        let mut jet = Jet::zero(level);
        for (e, c) in f.terms() {
            if e[0] + e[1] <= level {
                jet.rows[e[1] as usize][e[0] as usize] = c.numer() * &den / c.denom();
            }
        }
        jet.normalize();
        jet
    }

    fn zero(level: u32) -> Jet {
        Jet { level, rows: (0..=level).map(|j| vec![BigInt::zero(); (level - j + 1) as usize]).collect() }
    }

    pub(crate) fn constant_vanishes(&self) -> bool {
        self.rows[0][0].is_zero()
    }

    /// Order in `x` of `f(x, 0)`; `None` when it vanishes.
    pub(crate) fn order_on_axis(&self) -> Option<u32> {
        self.rows[0].iter().position(|c| !c.is_zero()).map(|i| i as u32)
    }

    fn axis_coefficient(&self, i: u32) -> &BigInt {
        &self.rows[0][i as usize]
    }

    /// Keeps terms up to total degree `level`.
    pub(crate) fn truncate(&self, level: u32) -> Jet {
        let level = level.min(self.level);
        let mut out = Jet::zero(level);
        for (j, row) in out.rows.iter_mut().enumerate() {
            for (i, c) in row.iter_mut().enumerate() {
                c.clone_from(&self.rows[j][i]);
            }
        }
        out.normalize();
        out
    }

    /// `f / y`, valid when `f(x, 0) = 0`; the level drops by one.
    pub(crate) fn divide_by_y(&self) -> Jet {
        debug_assert!(self.order_on_axis().is_none());
        let level = self.level.saturating_sub(1);
        let mut out = Jet::zero(level);
        if self.level > 0 {
            for (j, row) in out.rows.iter_mut().enumerate() {
                for (i, c) in row.iter_mut().enumerate() {
                    c.clone_from(&self.rows[j + 1][i]);
                }
            }
        }
        out.normalize();
        out
    }

    /// `a g - b x^k f`, at the smaller of the two levels.
    pub(crate) fn eliminate(g: &Jet, a: &BigInt, f: &Jet, b: &BigInt, k: u32) -> Jet {
        let level = g.level.min(f.level);
        let mut out = Jet::zero(level);
        for (j, row) in out.rows.iter_mut().enumerate() {
            for (i, c) in row.iter_mut().enumerate() {
                let mut v = a * &g.rows[j][i];
                if i as u32 >= k {
                    let src = &f.rows[j][i - k as usize];
                    if !src.is_zero() {
                        v -= b * src;
                    }
                }
                *c = v;
            }
        }
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        let g = self.rows.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            self.rows.iter_mut().flatten().for_each(|c| *c = &*c / &g);
        }
    }
}

/// The reduction on jets of level `budget`. `Some(I)` is exact whenever
/// `I <= budget`; `None` means the budget was too small.
pub(crate) fn reduce(f: &SparsePoly, g: &SparsePoly, budget: u32) -> Option<u32> {
    let (mut f, mut g) = (Jet::new(f, budget), Jet::new(g, budget));
    let mut total = 0u32;
    loop {
        if !f.constant_vanishes() || !g.constant_vanishes() {
            return Some(total);
        }
        let (mut rf, mut rg) = (f.order_on_axis(), g.order_on_axis());
        match (rf, rg) {
            (None, None) => return None,
            (None, Some(_)) => {}
            (Some(a), Some(b)) if b >= a => {}
            (Some(_), None) => {}
            _ => {
                std::mem::swap(&mut f, &mut g);
                std::mem::swap(&mut rf, &mut rg);
            }
        }
        if rf.is_none() {
            std::mem::swap(&mut f, &mut g);
            std::mem::swap(&mut rf, &mut rg);
        }
        let r = rf.expect("ordered so f(x, 0) is nonzero");
        match rg {
            None => {
                // g = y h and I(f, y) = ord f(x, 0).
                total += r;
                if total > budget {
                    return None;
                }
                let level = budget - total;
                g = g.divide_by_y().truncate(level);
                f = f.truncate(level);
            }
            Some(s) => {
                let (a, b) = (f.axis_coefficient(r).clone(), g.axis_coefficient(s).clone());
                let (a, b) = if a.is_negative() { (-a, -b) } else { (a, b) };
                g = Jet::eliminate(&g, &a, &f, &b, s - r);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_budget_is_detected() {
        let x = SparsePoly::var(2, 0);
        let y = SparsePoly::var(2, 1);
        let f = &y - &x.pow(5);
        assert_eq!(reduce(&f, &y, 8), Some(5));
        assert_eq!(reduce(&f, &y, 3), None);
    }
}
