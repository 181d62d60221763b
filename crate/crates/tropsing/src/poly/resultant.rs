//! Sylvester resultants with polynomial coefficients.

use std::collections::HashMap;

use super::sparse::SparsePoly;

/// Determinant of a square matrix of polynomials by Laplace expansion along
/// rows, memoized over the set of still-unused columns. Division-free.
pub fn determinant(m: &[Vec<SparsePoly>], nvars: usize) -> SparsePoly {
    let n = m.len();
    assert!(n < 64 && m.iter().all(|r| r.len() == n), "square matrix of size < 64");
    fn go(m: &[Vec<SparsePoly>], nvars: usize, cols: u64, memo: &mut HashMap<u64, SparsePoly>) -> SparsePoly {
        let n = m.len();
        let row = n - cols.count_ones() as usize;
        if row == n {
            return SparsePoly::one(nvars);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = SparsePoly::zero(nvars);
        // Sign of a column equals the parity of free columns before it.
        let mut parity = 0;
        for c in 0..n {
            if cols & (1 << c) == 0 {
                continue;
            }
            let entry = &m[row][c];
            if !entry.is_zero() {
                let minor = go(m, nvars, cols & !(1 << c), memo);
                if !minor.is_zero() {
                    let term = entry * &minor;
                    acc = if parity == 0 { &acc + &term } else { &acc - &term };
                }
            }
            parity ^= 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    if n == 0 {
        return SparsePoly::one(nvars);
    }
    go(m, nvars, (1u64 << n) - 1, &mut HashMap::new())
}

/// Resultant of `f` and `g` with respect to variable `var`: the determinant of
/// the Sylvester matrix whose first rows carry the coefficients of `f`, highest
/// power first. The result does not involve `var`.
pub fn sylvester_resultant(f: &SparsePoly, g: &SparsePoly, var: usize) -> SparsePoly {
    let nv = f.nvars();
    assert_eq!(nv, g.nvars());
    let m = f.degree_in(var).expect("f is nonzero") as usize;
    let n = g.degree_in(var).expect("g is nonzero") as usize;
    assert!(m > 0 && n > 0, "positive degrees in the eliminated variable");
    let fc: Vec<SparsePoly> = (0..=m).rev().map(|k| f.coefficient_in(var, k as u32)).collect();
    let gc: Vec<SparsePoly> = (0..=n).rev().map(|k| g.coefficient_in(var, k as u32)).collect();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![SparsePoly::zero(nv); size];
        r[i..i + m + 1].clone_from_slice(&fc);
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![SparsePoly::zero(nv); size];
        r[i..i + n + 1].clone_from_slice(&gc);
        rows.push(r);
    }
    determinant(&rows, nv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn v(n: usize, i: usize) -> SparsePoly {
        SparsePoly::var(n, i)
    }

    #[test]
    fn linear_resultant() {
        // variables: t, a, b
        let f = &v(3, 0) - &v(3, 1);
        let g = &v(3, 0) - &v(3, 2);
        assert_eq!(sylvester_resultant(&f, &g, 0), &v(3, 1) - &v(3, 2));
    }

    #[test]
    fn shared_root_vanishes() {
        let one = SparsePoly::one(1);
        let t = v(1, 0);
        assert!(sylvester_resultant(&(&t.pow(2) - &one), &(&t - &one), 0).is_zero());
    }

    #[test]
    fn generic_quadratics() {
        // variables: t, a0, a1, a2, b0, b1, b2
        let n = 7;
        let t = v(n, 0);
        let (a0, a1, a2, b0, b1, b2) = (v(n, 1), v(n, 2), v(n, 3), v(n, 4), v(n, 5), v(n, 6));
        let f = &(&(&a2 * &t.pow(2)) + &(&a1 * &t)) + &a0;
        let g = &(&(&b2 * &t.pow(2)) + &(&b1 * &t)) + &b0;
        let p = &(&a2 * &b0) - &(&a0 * &b2);
        let q = &(&a2 * &b1) - &(&a1 * &b2);
        let r = &(&a1 * &b0) - &(&a0 * &b1);
        let classical = &p.pow(2) - &(&q * &r);
        assert_eq!(sylvester_resultant(&f, &g, 0), classical);
    }

    #[test]
    fn determinant_of_permutation_sign() {
        let k = |x: i64| SparsePoly::constant(0, Rational::from_integer(x.into()));
        let m = vec![vec![k(0), k(1), k(0)], vec![k(0), k(0), k(1)], vec![k(1), k(0), k(0)]];
        assert_eq!(determinant(&m, 0), k(1));
        let swap = vec![vec![k(0), k(1)], vec![k(1), k(0)]];
        assert_eq!(determinant(&swap, 0), k(-1));
    }
}
