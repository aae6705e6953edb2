//! Small dense exact and floating-point matrix helpers.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

pub type BigQ = BigRational;

/// Exact rational square matrix, row-major.
pub type QMatrix = Vec<Vec<BigQ>>;

pub fn big(r: &Rational) -> BigQ {
    BigQ::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Converts back to `Ratio<i64>` if it fits.
pub fn small(r: &BigQ) -> Option<Rational> {
    Some(Rational::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

pub fn to_f64(r: &BigQ) -> f64 {
    // Both parts can exceed f64 range only for absurd inputs; fall back to a
    // scaled division.
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(p), Some(q)) if p.is_finite() && q.is_finite() => p / q,
        _ => {
            let shift = r.denom().bits().saturating_sub(900);
            let p = (r.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            let q = (r.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            p / q
        }
    }
}

/// Determinant by Gaussian elimination over the rationals.
pub fn det(m: &QMatrix) -> BigQ {
    let n = m.len();
    let mut a = m.clone();
    let mut result = BigQ::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigQ::zero();
        };
        if p != k {
            a.swap(p, k);
            result = -result;
        }
        let pivot = a[k][k].clone();
        result *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    result
}

/// Exact positive semidefiniteness of a symmetric rational matrix by
/// symmetric elimination: a negative pivot, or a zero pivot with a nonzero
/// row, rules it out.
pub fn is_psd_exact(m: &QMatrix) -> bool {
    let n = m.len();
    let mut a = m.clone();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_negative() {
            return false;
        }
        if pivot.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k + 1..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 0.0;
    }
    let mat = DMatrix::from_fn(n, n, |i, j| m[i][j]);
    SymmetricEigen::new(mat).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn mat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(BigQ::zero(), |acc, t| acc + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &QMatrix) -> QMatrix {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(v: i64) -> BigQ {
        BigQ::from_integer(BigInt::from(v))
    }

    #[test]
    fn determinant_small_cases() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(det(&m), q(5));
        let sing = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(det(&sing), q(0));
        let perm = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(det(&perm), q(-1));
    }

    #[test]
    fn exact_psd() {
        assert!(is_psd_exact(&vec![vec![q(1), q(1)], vec![q(1), q(1)]]));
        assert!(!is_psd_exact(&vec![vec![q(1), q(2)], vec![q(2), q(1)]]));
        assert!(!is_psd_exact(&vec![vec![q(0), q(1)], vec![q(1), q(5)]]));
        assert!(is_psd_exact(&vec![vec![q(0), q(0)], vec![q(0), q(5)]]));
    }

    #[test]
    fn eigenvalue_of_rank_one() {
        let m = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(min_eigenvalue(&m).abs() < 1e-12);
    }
}
