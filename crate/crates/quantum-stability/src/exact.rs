//! Exact linear algebra over ℚ.

use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Solves `m · x = rhs` for a square matrix given by rows. Returns `None`
/// when the matrix is singular.
pub(crate) fn solve(m: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = BigRational::one() / a[col][col].clone();
        for entry in a[col].iter_mut() {
            *entry = entry.clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let v = a[col][c].clone() * f.clone();
                    a[r][c] = a[r][c].clone() - v;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap_or_default()).collect())
}

/// Determinant of a square matrix given by rows.
pub(crate) fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= p.clone();
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = a[r][col].clone() / p.clone();
                for c in col..n {
                    let v = a[col][c].clone() * f.clone();
                    a[r][c] = a[r][c].clone() - v;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn solves_small_system() {
        let m = alloc::vec![alloc::vec![q(2, 1), q(1, 1)], alloc::vec![q(1, 1), q(3, 1)]];
        let x = solve(&m, &[q(3, 1), q(5, 1)]).unwrap();
        assert_eq!(x, alloc::vec![q(4, 5), q(7, 5)]);
        assert_eq!(determinant(&m), q(5, 1));
    }

    #[test]
    fn singular_matrix_has_no_solution() {
        let m = alloc::vec![alloc::vec![q(1, 1), q(2, 1)], alloc::vec![q(2, 1), q(4, 1)]];
        assert!(solve(&m, &[q(1, 1), q(1, 1)]).is_none());
        assert_eq!(determinant(&m), q(0, 1));
    }
}
