//! Smith normal form over ℤ with transformation matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u · m · v = d` with `u`, `v` unimodular and `d` diagonal with
/// `d₁ | d₂ | …`, all diagonal entries nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut d: Vec<Vec<BigInt>> = m.entries().to_vec();
    let mut u = IntMatrix::identity(r).into_entries();
    let mut v = IntMatrix::identity(c).into_entries();

    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&d, t) else {
                return finish(u, d, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                add_row_multiple(&mut d, i, t, &-q.clone());
                add_row_multiple(&mut u, i, t, &-q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..c {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                add_col_multiple(&mut d, j, t, &-q.clone());
                add_col_multiple(&mut v, j, t, &-q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Enforce the divisibility chain: fold an offending row into row t.
            let offender = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !d[i][j].is_multiple_of(&d[t][t]))
            });
            match offender {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish(u, d, v)
}

fn finish(u: Vec<Vec<BigInt>>, d: Vec<Vec<BigInt>>, v: Vec<Vec<BigInt>>) -> SmithForm {
    SmithForm {
        u: IntMatrix::from_entries_unchecked(u),
        d: IntMatrix::from_entries_unchecked(d),
        v: IntMatrix::from_entries_unchecked(v),
    }
}

fn min_abs_entry(d: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in d.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// row[dst] += k · row[src]
fn add_row_multiple(m: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (x, s) in m[dst].iter_mut().zip(src_row) {
        *x += k * s;
    }
}

/// col[dst] += k · col[src]
fn add_col_multiple(m: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[dst] += k * s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::minors::determinant;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&s.u.mul(m).mul(&s.v), &s.d);
        assert_eq!(determinant(&s.u).abs(), BigInt::one());
        assert_eq!(determinant(&s.v).abs(), BigInt::one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{diag:?}");
            } else {
                assert!(w[0].is_zero() || w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn diag_2_3() {
        let s = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn single_row() {
        let s = check(&IntMatrix::from_i64(&[&[1, -1]]));
        assert_eq!(s.d, IntMatrix::from_i64(&[&[1, 0]]));
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::from_i64(&[&[0, 0], &[0, 0]]));
        assert_eq!(s.rank(), 0);
    }

    proptest! {
        #[test]
        fn snf_identity_holds(
            entries in proptest::collection::vec(-9i64..10, 12),
            shape in 0usize..4,
        ) {
            let (r, c) = [(3, 4), (4, 3), (2, 6), (1, 5)][shape];
            let rows: Vec<&[i64]> = entries[..r * c].chunks(c).collect();
            check(&IntMatrix::from_i64(&rows));
        }
    }
}
