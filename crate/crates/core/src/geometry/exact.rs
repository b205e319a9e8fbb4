//! Exact determinant signs for small integer matrices.
//!
//! A floating-point Laplace expansion answers whenever its magnitude clears
//! an error bound derived from the permanent; otherwise the sign comes from
//! fraction-free (Bareiss) elimination over big integers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Relative error budget for the filter. Entries up to ~2^82 lose at most one
/// rounding on conversion and the expansion of a 5x5 matrix accumulates well
/// under 100 ulps; the bound leaves several orders of magnitude of slack.
const FILTER_EPS: f64 = 1e-10;

pub fn det_sign(rows: &[Vec<i128>]) -> i8 {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    if n == 0 {
        return 1;
    }
    let f: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let (det, perm) = laplace(&f, 0, (1u32 << n) - 1);
    if det.abs() > perm * FILTER_EPS {
        return if det > 0.0 { 1 } else { -1 };
    }
    if perm == 0.0 {
        return 0;
    }
    bareiss_sign(rows)
}

/// Determinant and permanent of absolute values, expanding along row `row`
/// over the columns in `cols`.
fn laplace(m: &[Vec<f64>], row: usize, cols: u32) -> (f64, f64) {
    if row == m.len() - 1 {
        let c = cols.trailing_zeros() as usize;
        return (m[row][c], m[row][c].abs());
    }
    let mut det = 0.0;
    let mut perm = 0.0;
    let mut sign = 1.0;
    let mut rest = cols;
    while rest != 0 {
        let c = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let a = m[row][c];
        if a != 0.0 {
            let (d, p) = laplace(m, row + 1, cols & !(1 << c));
            det += sign * a * d;
            perm += a.abs() * p;
        }
        sign = -sign;
    }
    (det, perm)
}

fn bareiss_sign(rows: &[Vec<i128>]) -> i8 {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = &a[n - 1][n - 1];
    if d.is_zero() {
        0
    } else if d.is_positive() {
        sign
    } else {
        -sign
    }
}
