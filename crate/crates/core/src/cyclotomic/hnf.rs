//! Column Hermite normal form over `Z` with the unimodular transform kept.
//!
//! For an integer matrix `A` (rows × cols) we compute a unimodular `U` with
//! `A·U = H`, where `H` is in column echelon form: the first `rank` columns
//! carry strictly descending pivots with positive pivot entries, entries to
//! the left of a pivot are reduced into `[0, pivot)`, and the remaining
//! columns are zero. The trailing columns of `U` then span the integer kernel
//! of `A`, and `A·c = b` is solved by forward substitution on `H`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub(crate) struct ColumnHnf {
    rows: usize,
    /// Columns of `H`, each of length `rows`.
    h: Vec<Vec<BigInt>>,
    /// Columns of `U`, each of length `cols`.
    u: Vec<Vec<BigInt>>,
    /// `(row, column)` of each pivot, in column order.
    pivots: Vec<(usize, usize)>,
}

/// `col_a ← s·col_a + t·col_b`, `col_b ← p·col_a + q·col_b` (old values).
fn combine(a: &mut [BigInt], b: &mut [BigInt], s: &BigInt, t: &BigInt, p: &BigInt, q: &BigInt) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let nx = s * &*x + t * &*y;
        let ny = p * &*x + q * &*y;
        *x = nx;
        *y = ny;
    }
}

fn axpy(target: &mut [BigInt], factor: &BigInt, source: &[BigInt]) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= factor * s;
    }
}

impl ColumnHnf {
    /// `columns[j][i]` is entry `(i, j)` of `A`.
    pub(crate) fn new(rows: usize, columns: Vec<Vec<BigInt>>) -> Self {
        let cols = columns.len();
        debug_assert!(columns.iter().all(|c| c.len() == rows));
        let mut h = columns;
        let mut u: Vec<Vec<BigInt>> = (0..cols)
            .map(|j| {
                let mut e = vec![BigInt::zero(); cols];
                e[j] = BigInt::one();
                e
            })
            .collect();
        let mut pivots = Vec::new();
        let mut next = 0;

        for row in 0..rows {
            if next == cols {
                break;
            }
            for j in next + 1..cols {
                if h[j][row].is_zero() {
                    continue;
                }
                if h[next][row].is_zero() {
                    h.swap(next, j);
                    u.swap(next, j);
                    continue;
                }
                let a = h[next][row].clone();
                let b = h[j][row].clone();
                let e = a.extended_gcd(&b);
                // [s -b/g; t a/g] has determinant 1
                let p = -(&b / &e.gcd);
                let q = &a / &e.gcd;
                let (lo, hi) = h.split_at_mut(j);
                combine(&mut lo[next], &mut hi[0], &e.x, &e.y, &p, &q);
                let (lo, hi) = u.split_at_mut(j);
                combine(&mut lo[next], &mut hi[0], &e.x, &e.y, &p, &q);
            }
            if h[next][row].is_zero() {
                continue;
            }
            if h[next][row].is_negative() {
                h[next].iter_mut().for_each(|v| *v = -&*v);
                u[next].iter_mut().for_each(|v| *v = -&*v);
            }
            let pivot = h[next][row].clone();
            for j in 0..next {
                let f = h[j][row].div_floor(&pivot);
                if f.is_zero() {
                    continue;
                }
                let (lo, hi) = h.split_at_mut(next);
                axpy(&mut lo[j], &f, &hi[0]);
                let (lo, hi) = u.split_at_mut(next);
                axpy(&mut lo[j], &f, &hi[0]);
            }
            pivots.push((row, next));
            next += 1;
        }
        Self { rows, h, u, pivots }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Some integer `c` with `A·c = b`, or `None` if no integer solution exists.
    pub(crate) fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows);
        let cols = self.u.len();
        let mut y = vec![BigInt::zero(); cols];
        let mut residual = b.to_vec();
        for &(row, col) in &self.pivots {
            let (q, r) = residual[row].div_rem(&self.h[col][row]);
            if !r.is_zero() {
                return None;
            }
            axpy(&mut residual, &q, &self.h[col]);
            y[col] = q;
        }
        if residual.iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut c = vec![BigInt::zero(); cols];
        for (col, yc) in y.iter().enumerate() {
            if yc.is_zero() {
                continue;
            }
            for (ci, uij) in c.iter_mut().zip(&self.u[col]) {
                *ci += yc * uij;
            }
        }
        Some(c)
    }

    /// A basis of `{c ∈ Z^cols : A·c = 0}`.
    pub(crate) fn kernel_basis(&self) -> &[Vec<BigInt>] {
        &self.u[self.rank()..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> (usize, Vec<Vec<BigInt>>) {
        let r = rows.len();
        let c = rows[0].len();
        let cols = (0..c)
            .map(|j| (0..r).map(|i| BigInt::from(rows[i][j])).collect())
            .collect();
        (r, cols)
    }

    fn apply(rows: &[&[i64]], c: &[BigInt]) -> Vec<BigInt> {
        rows.iter()
            .map(|row| row.iter().zip(c).map(|(&a, x)| BigInt::from(a) * x).sum())
            .collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn solves_and_detects_non_integral() {
        let rows: &[&[i64]] = &[&[2, 4, 6], &[1, 3, 5]];
        let (r, cols) = mat(rows);
        let hnf = ColumnHnf::new(r, cols);
        assert_eq!(hnf.rank(), 2);
        let b = big(&[2, 2]);
        let c = hnf.solve(&b).unwrap();
        assert_eq!(apply(rows, &c), b);
        // first row is always even
        assert!(hnf.solve(&big(&[1, 0])).is_none());
        for k in hnf.kernel_basis() {
            assert!(apply(rows, k).iter().all(Zero::is_zero));
        }
        assert_eq!(hnf.kernel_basis().len(), 1);
    }

    #[test]
    fn inconsistent_system() {
        let rows: &[&[i64]] = &[&[1, 1], &[2, 2]];
        let (r, cols) = mat(rows);
        let hnf = ColumnHnf::new(r, cols);
        assert_eq!(hnf.rank(), 1);
        assert!(hnf.solve(&big(&[1, 3])).is_none());
        let c = hnf.solve(&big(&[3, 6])).unwrap();
        assert_eq!(apply(rows, &c), big(&[3, 6]));
    }

    #[test]
    fn gcd_lattice() {
        // 6a + 10b + 15c reaches every integer
        let rows: &[&[i64]] = &[&[6, 10, 15]];
        let (r, cols) = mat(rows);
        let hnf = ColumnHnf::new(r, cols);
        for target in -20..20 {
            let c = hnf.solve(&big(&[target])).unwrap();
            assert_eq!(apply(rows, &c), big(&[target]));
        }
        assert_eq!(hnf.kernel_basis().len(), 2);
    }
}
