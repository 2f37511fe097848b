//! Dense exact phase-one simplex (Bland's rule, so no cycling).

use num_traits::{One, Signed, Zero};

use super::{Constraint, LpResult};
use crate::exactnum::Rational;

/// Outcome for `M z = b, z ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum StandardForm {
    /// A basic feasible solution (a vertex of the polyhedron).
    Vertex(Vec<Rational>),
    /// `y` with `yᵀM ≤ 0` and `yᵀb > 0`.
    Infeasible(Vec<Rational>),
}

/// Find a vertex of `{z ≥ 0 : M z = b}` or a Farkas certificate.
/// `m` has `b.len()` rows and `ncols` columns.
pub fn solve_standard_form(m: &[Vec<Rational>], ncols: usize, b: &[Rational]) -> StandardForm {
    let rows = b.len();
    let width = ncols + rows;
    // Flip rows so the right-hand side is nonnegative; artificials form the
    // initial basis.
    let sigma: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let mut t: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r = Vec::with_capacity(width + 1);
            for j in 0..ncols {
                r.push(if sigma[i] { -m[i][j].clone() } else { m[i][j].clone() });
            }
            for k in 0..rows {
                r.push(if k == i { Rational::one() } else { Rational::zero() });
            }
            r.push(b[i].abs());
            r
        })
        .collect();
    let mut basis: Vec<usize> = (ncols..width).collect();

    // Reduced costs for minimizing the sum of artificials; last entry is
    // minus the objective value.
    let mut obj: Vec<Rational> = (0..=width)
        .map(|j| {
            if (ncols..width).contains(&j) {
                Rational::zero()
            } else {
                -t.iter().map(|r| r[j].clone()).sum::<Rational>()
            }
        })
        .collect();

    while let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, r) in t.iter().enumerate() {
            if !r[enter].is_positive() {
                continue;
            }
            let ratio = &r[width] / &r[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (p, _) = leave.expect("phase one is bounded below");
        pivot(&mut t, &mut obj, p, enter);
        basis[p] = enter;
    }

    if obj[width].is_negative() {
        // Optimal value −obj[width] > 0. Duals w_i = 1 − (reduced cost of
        // artificial i); undo the row flips.
        let y = (0..rows)
            .map(|i| {
                let w = Rational::one() - &obj[ncols + i];
                if sigma[i] {
                    -w
                } else {
                    w
                }
            })
            .collect();
        return StandardForm::Infeasible(y);
    }

    let mut z = vec![Rational::zero(); ncols];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < ncols {
            z[bj] = t[i][width].clone();
        }
    }
    StandardForm::Vertex(z)
}

fn pivot(t: &mut [Vec<Rational>], obj: &mut [Rational], p: usize, q: usize) {
    let inv = t[p][q].recip();
    for x in t[p].iter_mut() {
        *x *= &inv;
    }
    let prow = t[p].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == p || r[q].is_zero() {
            continue;
        }
        let f = r[q].clone();
        for (x, pv) in r.iter_mut().zip(&prow) {
            *x -= &f * pv;
        }
    }
    if !obj[q].is_zero() {
        let f = obj[q].clone();
        for (x, pv) in obj.iter_mut().zip(&prow) {
            *x -= &f * pv;
        }
    }
}

/// `A x ≥ b` with free `x`, via `x = x⁺ − x⁻` and surplus `s`:
/// `A x⁺ − A x⁻ − s = b`.
pub(super) fn solve_inequalities(constraints: &[Constraint], dim: usize) -> LpResult {
    let rows = constraints.len();
    let ncols = 2 * dim + rows;
    let m: Vec<Vec<Rational>> = constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut r = Vec::with_capacity(ncols);
            r.extend(c.coeffs.iter().cloned());
            r.extend(c.coeffs.iter().map(|x| -x));
            for k in 0..rows {
                r.push(if k == i { -Rational::one() } else { Rational::zero() });
            }
            r
        })
        .collect();
    let b: Vec<Rational> = constraints.iter().map(|c| c.rhs.clone()).collect();
    match solve_standard_form(&m, ncols, &b) {
        StandardForm::Vertex(z) => LpResult::Feasible {
            point: (0..dim).map(|j| &z[j] - &z[dim + j]).collect(),
        },
        StandardForm::Infeasible(y) => LpResult::Infeasible { farkas: y },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn vertex_of_simplex() {
        let m = q(&[&[1, 1, 1]]);
        match solve_standard_form(&m, 3, &[int(4)]) {
            StandardForm::Vertex(z) => {
                assert_eq!(z.iter().sum::<Rational>(), int(4));
                assert_eq!(z.iter().filter(|x| !x.is_zero()).count(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn standard_form_certificate() {
        // z1 + z2 = −1 has no nonnegative solution.
        let m = q(&[&[1, 1]]);
        match solve_standard_form(&m, 2, &[int(-1)]) {
            StandardForm::Infeasible(y) => {
                assert!(y[0].is_negative());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_redundant_rows() {
        let m = q(&[&[1, -1, 0], &[2, -2, 0], &[0, 1, 1]]);
        match solve_standard_form(&m, 3, &[int(1), int(2), int(3)]) {
            StandardForm::Vertex(z) => {
                assert_eq!(&z[0] - &z[1], int(1));
                assert_eq!(&z[1] + &z[2], int(3));
            }
            other => panic!("{other:?}"),
        }
    }
}
