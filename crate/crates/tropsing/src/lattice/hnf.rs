//! Hermite normal form over the integers, and the lattice utilities built on it.
//!
//! Matrices are row-major `Vec<Vec<i128>>`; the lattice in question is always
//! the row span.

/// Row-style Hermite normal form of the row lattice.
///
/// Nonzero rows come first, pivots are strictly positive and move strictly to
/// the right, and entries above each pivot lie in `[0, pivot)`. Zero rows are
/// dropped, so the length of the result is the rank.
pub fn row_hnf(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let (h, _) = hnf_with_transform(rows, false);
    h
}

/// Row HNF, optionally tracking the unimodular transform `U` with `U * rows = H`.
///
/// When tracking, the returned transform has one row per input row and the
/// rows past `rank` span the left kernel of `rows`.
fn hnf_with_transform(rows: &[Vec<i128>], track: bool) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let mut u: Vec<Vec<i128>> = if track {
        (0..m)
            .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
            .collect()
    } else {
        Vec::new()
    };

    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        if pivot_row == m {
            break;
        }
        // Euclid on the column below pivot_row until a single nonzero remains.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m {
                if a[r][col] != 0 && best.is_none_or(|b| a[r][col].abs() < a[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            if track {
                u.swap(pivot_row, b);
            }
            let mut done = true;
            for r in pivot_row + 1..m {
                if a[r][col] != 0 {
                    let q = a[r][col].div_euclid(a[pivot_row][col]);
                    sub_row(&mut a, r, pivot_row, q);
                    if track {
                        sub_row(&mut u, r, pivot_row, q);
                    }
                    if a[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col] == 0 {
            continue;
        }
        if a[pivot_row][col] < 0 {
            negate_row(&mut a, pivot_row);
            if track {
                negate_row(&mut u, pivot_row);
            }
        }
        let p = a[pivot_row][col];
        for r in 0..pivot_row {
            let q = a[r][col].div_euclid(p);
            if q != 0 {
                sub_row(&mut a, r, pivot_row, q);
                if track {
                    sub_row(&mut u, r, pivot_row, q);
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    a.truncate(pivot_row);
    (a, u)
}

fn sub_row(a: &mut [Vec<i128>], target: usize, source: usize, q: i128) {
    let (t, s) = if target < source {
        let (lo, hi) = a.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s) {
        *x = x
            .checked_sub(q.checked_mul(*y).expect("HNF entry overflow"))
            .expect("HNF entry overflow");
    }
}

fn negate_row(a: &mut [Vec<i128>], r: usize) {
    for x in &mut a[r] {
        *x = -*x;
    }
}

/// Rank of the row lattice.
pub fn rank(rows: &[Vec<i128>]) -> usize {
    row_hnf(rows).len()
}

/// Index of the row lattice in `Z^n`, or `None` when it has rank `< n`.
pub fn index_in_full_lattice(rows: &[Vec<i128>], n: usize) -> Option<u128> {
    let h = row_hnf(rows);
    if h.len() < n {
        return None;
    }
    Some(h.iter().enumerate().map(|(i, r)| r[i].unsigned_abs()).product())
}

/// A basis of `{v in Z^n : rows * v = 0}`; saturated by construction.
pub fn integer_kernel(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect();
    }
    let transposed: Vec<Vec<i128>> = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let (h, u) = hnf_with_transform(&transposed, true);
    u.into_iter().skip(h.len()).collect()
}

/// A basis of the saturation `span_Q(rows) ∩ Z^n`.
pub fn saturation(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let orth = integer_kernel(rows, n);
    let sat = integer_kernel(&orth, n);
    row_hnf(&sat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_small_lattice() {
        let h = row_hnf(&[vec![2, 0], vec![3, 0], vec![0, 4], vec![0, 6]]);
        assert_eq!(h, vec![vec![1, 0], vec![0, 2]]);
    }

    #[test]
    fn index_and_rank_deficiency() {
        assert_eq!(index_in_full_lattice(&[vec![2, 1], vec![0, 3]], 2), Some(6));
        assert_eq!(index_in_full_lattice(&[vec![2, 4], vec![1, 2]], 2), None);
    }

    #[test]
    fn kernel_is_saturated() {
        let k = integer_kernel(&[vec![2, 4, 6]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(2 * v[0] + 4 * v[1] + 6 * v[2], 0);
        }
        // the kernel of x + 2y + 3z = 0 has index 1 in its saturation
        let sat = saturation(&k, 3);
        assert_eq!(row_hnf(&k), sat);
    }

    #[test]
    fn saturation_of_scaled_vector() {
        assert_eq!(saturation(&[vec![2, 4, 0]], 3), vec![vec![1, 2, 0]]);
    }
}
