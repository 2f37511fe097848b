//! Determinants and maximal minors.
//!
//! Minors are enumerated directly: `C(n, d)` Bareiss determinants. That is
//! fine for the matrix sizes we care about (n up to ~16).

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::IntMatrix;

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.entries().to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// All `d × d` minors of a `d × n` matrix, keyed by column subset
/// (lexicographic order).
pub fn maximal_minors(a: &IntMatrix) -> Vec<(Vec<usize>, BigInt)> {
    let d = a.rows();
    let subsets: Vec<Vec<usize>> = (0..a.cols()).combinations(d).collect();
    subsets
        .into_par_iter()
        .map(|s| {
            let det = determinant(&a.select_columns(&s));
            (s, det)
        })
        .collect()
}

pub fn is_unimodular(a: &IntMatrix) -> bool {
    maximal_minors(a).iter().all(|(_, m)| m.abs() <= BigInt::one())
}

pub fn minors_coprime(a: &IntMatrix) -> bool {
    maximal_minors(a)
        .iter()
        .fold(BigInt::zero(), |g, (_, m)| g.gcd(m))
        .is_one()
}
