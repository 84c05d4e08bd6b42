//! Integer diagonalization of relation matrices.
//!
//! A finitely generated abelian group `Z^k / rowspan(A)` is turned into a
//! direct sum of cyclic groups by unimodular row and column operations. Only
//! the column transform matters for coordinates, so it is tracked together
//! with its inverse. Divisibility between the diagonal entries is not needed
//! here and is not enforced.

use alloc::vec;
use alloc::vec::Vec;

/// Result of diagonalizing a relation matrix with `k` columns.
#[derive(Clone, Debug)]
pub struct Diagonal {
    /// `diag[i]` is the order of the `i`-th new cyclic summand (0 means free).
    pub diag: Vec<i128>,
    /// Column transform `Q`: new coordinates are `y = x·Q`.
    pub q: Vec<Vec<i128>>,
    /// `Q⁻¹`: row `i` is the old-coordinate vector of the `i`-th new generator.
    pub q_inv: Vec<Vec<i128>>,
}

pub fn diagonalize(mut a: Vec<Vec<i128>>, k: usize) -> Diagonal {
    let r = a.len();
    let mut q = identity(k);
    let mut qi = identity(k);
    let mut diag = vec![0i128; k];

    for t in 0..k.min(r) {
        let Some((pi, pj)) = min_entry(&a, t..r, t..k) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, &mut q, &mut qi, t, pj);
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let f = a[i][t] / p;
                if f != 0 {
                    for j in t..k {
                        a[i][j] -= f * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..k {
                let f = a[t][j] / p;
                if f != 0 {
                    for row in a.iter_mut() {
                        row[j] -= f * row[t];
                    }
                    for row in q.iter_mut() {
                        row[j] -= f * row[t];
                    }
                    for c in 0..k {
                        qi[t][c] += f * qi[j][c];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
            // A remainder smaller than the pivot survived; make it the pivot.
            let (mut bi, mut bj, mut best) = (t, t, a[t][t].abs());
            for i in t + 1..r {
                if a[i][t] != 0 && a[i][t].abs() < best {
                    (bi, bj, best) = (i, t, a[i][t].abs());
                }
            }
            for j in t + 1..k {
                if a[t][j] != 0 && a[t][j].abs() < best {
                    (bi, bj, best) = (t, j, a[t][j].abs());
                }
            }
            a.swap(t, bi);
            swap_cols(&mut a, &mut q, &mut qi, t, bj);
        }
        diag[t] = a[t][t].abs();
    }
    Diagonal { diag, q, q_inv: qi }
}

fn identity(k: usize) -> Vec<Vec<i128>> {
    (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn swap_cols(a: &mut [Vec<i128>], q: &mut [Vec<i128>], qi: &mut [Vec<i128>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
    for row in q.iter_mut() {
        row.swap(x, y);
    }
    qi.swap(x, y);
}

fn min_entry(
    a: &[Vec<i128>],
    rows: core::ops::Range<usize>,
    cols: core::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i128)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = a[i][j].abs();
            if v != 0 && best.is_none_or(|(_, _, b)| v < b) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let k = b[0].len();
        a.iter()
            .map(|row| (0..k).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
            .collect()
    }

    #[test]
    fn z4_mod_2_is_cyclic_of_order_2() {
        let d = diagonalize(vec![vec![4], vec![2]], 1);
        assert_eq!(d.diag, [2]);
    }

    #[test]
    fn transform_is_unimodular_and_inverse() {
        let a = vec![vec![6, 4, 0], vec![0, 10, 2], vec![4, 0, 8]];
        let d = diagonalize(a, 3);
        let prod = mat_mul(&d.q, &d.q_inv);
        assert_eq!(prod, identity(3));
        let order: i128 = d.diag.iter().product();
        // |det| of the relation matrix is the group order.
        assert_eq!(order.abs(), 6 * 80 - 4 * (0 - 8));
    }
}
