//! Dense Gaussian elimination over exact rationals.

use num_traits::Zero;

use crate::rational::ExactRational;

/// Row-major square matrix.
pub type Matrix = Vec<Vec<ExactRational>>;

/// Solves `a x = b` exactly. Returns `None` when `a` is singular.
///
/// Pivots are the first nonzero entry in each column; with exact arithmetic
/// a missing pivot is a genuine singularity.
pub fn solve(mut a: Matrix, mut b: Vec<ExactRational>) -> Option<Vec<ExactRational>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|row| row.len() == n), "system must be square");
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = ExactRational::from_integer(1.into()) / &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let (upper, lower) = a.split_at_mut(r);
            let pivot_row = &upper[col];
            for (dst, src) in lower[0][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= &factor * src;
            }
            let sub = &factor * &b[col];
            b[r] -= sub;
        }
    }
    let mut x = vec![ExactRational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn solves_small_system() {
        // d = 3 unitary level-2 system: 3x + y = 1/3, x + 3y = 0
        let a = vec![vec![int(3), int(1)], vec![int(1), int(3)]];
        let x = solve(a, vec![ratio(1, 3), int(0)]).unwrap();
        assert_eq!(x, vec![ratio(1, 8), ratio(-1, 24)]);
    }

    #[test]
    fn detects_singularity() {
        let a = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert!(solve(a, vec![int(1), int(2)]).is_none());
    }

    #[test]
    fn needs_row_swap() {
        let a = vec![vec![int(0), int(2)], vec![int(3), int(1)]];
        assert_eq!(solve(a, vec![int(4), int(5)]).unwrap(), vec![int(1), int(2)]);
    }
}
