//! Exact rational feasibility for systems `a·x ≥ b` over free `x ∈ ℚ^dim`.
//!
//! Every answer carries a certificate: a feasible point, or a Farkas vector
//! `y ≥ 0` with `yᵀA = 0` and `yᵀb > 0`. Small systems (dim ≤ 4) go through
//! Fourier–Motzkin elimination, larger ones through a dense two-phase simplex
//! with Bland's rule.

mod fourier_motzkin;
mod simplex;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::exactnum::{rational_vec_str, Rational};

pub use simplex::{solve_standard_form, StandardForm};

/// Largest dimension handled by Fourier–Motzkin in [`Method::Auto`].
pub const FM_MAX_DIM: usize = 4;

/// One inequality `coeffs · x ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint { coeffs, rhs }
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint {
            coeffs: coeffs.into_iter().map(|c| -c).collect(),
            rhs: -rhs,
        }
    }

    /// An equality, as the pair `≥` and `≤`.
    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> [Self; 2] {
        [Self::ge(coeffs.clone(), rhs.clone()), Self::le(coeffs, rhs)]
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        self.eval(x) >= self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LpResult {
    Feasible {
        #[serde(with = "rational_vec_str")]
        point: Vec<Rational>,
    },
    Infeasible {
        #[serde(with = "rational_vec_str")]
        farkas: Vec<Rational>,
    },
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpResult::Feasible { .. })
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Feasible { point } => Some(point),
            LpResult::Infeasible { .. } => None,
        }
    }

    pub fn farkas(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Infeasible { farkas } => Some(farkas),
            LpResult::Feasible { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    FourierMotzkin,
    Simplex,
}

pub fn feasible(constraints: &[Constraint], dim: usize) -> LpResult {
    feasible_with(constraints, dim, Method::Auto)
}

pub fn feasible_with(constraints: &[Constraint], dim: usize, method: Method) -> LpResult {
    debug_assert!(constraints.iter().all(|c| c.coeffs.len() == dim));
    let result = match method {
        Method::FourierMotzkin => fourier_motzkin::solve(constraints, dim),
        Method::Simplex => simplex::solve_inequalities(constraints, dim),
        Method::Auto if dim <= FM_MAX_DIM => fourier_motzkin::solve(constraints, dim),
        Method::Auto => simplex::solve_inequalities(constraints, dim),
    };
    debug_assert!(verify(constraints, dim, &result), "LP certificate failed to verify");
    result
}

/// Check a certificate against its system exactly.
pub fn verify(constraints: &[Constraint], dim: usize, result: &LpResult) -> bool {
    match result {
        LpResult::Feasible { point } => point.len() == dim && constraints.iter().all(|c| c.holds(point)),
        LpResult::Infeasible { farkas } => {
            if farkas.len() != constraints.len() || farkas.iter().any(Signed::is_negative) {
                return false;
            }
            let combo_zero = (0..dim).all(|j| {
                farkas
                    .iter()
                    .zip(constraints)
                    .map(|(y, c)| y * &c.coeffs[j])
                    .sum::<Rational>()
                    .is_zero()
            });
            let rhs: Rational = farkas.iter().zip(constraints).map(|(y, c)| y * &c.rhs).sum();
            combo_zero && rhs.is_positive()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use proptest::prelude::*;

    fn row(c: &[i64], b: i64) -> Constraint {
        Constraint::ge(c.iter().map(|&x| int(x)).collect(), int(b))
    }

    #[test]
    fn simple_box() {
        let cs = vec![row(&[1, 0], 1), row(&[-1, 0], -3), row(&[0, 1], 2), row(&[0, -1], -2)];
        for m in [Method::FourierMotzkin, Method::Simplex] {
            let r = feasible_with(&cs, 2, m);
            assert!(r.is_feasible());
            assert!(verify(&cs, 2, &r));
        }
    }

    #[test]
    fn contradictory() {
        let cs = vec![row(&[1, 1], 1), row(&[-1, -1], 0)];
        for m in [Method::FourierMotzkin, Method::Simplex] {
            let r = feasible_with(&cs, 2, m);
            assert!(!r.is_feasible());
            assert!(verify(&cs, 2, &r));
        }
    }

    #[test]
    fn empty_system_and_zero_dim() {
        assert!(feasible(&[], 3).is_feasible());
        assert!(feasible(&[row(&[], 0)], 0).is_feasible());
        assert!(!feasible(&[row(&[], 1)], 0).is_feasible());
    }

    #[test]
    fn six_dimensional_uses_simplex() {
        // x1 + … + x6 ≥ 6, each xi ≤ 1  ⇒ all equal 1
        let mut cs = vec![row(&[1, 1, 1, 1, 1, 1], 6)];
        for i in 0..6 {
            let mut c = [0i64; 6];
            c[i] = -1;
            cs.push(row(&c, -1));
        }
        let r = feasible(&cs, 6);
        assert_eq!(r.point().unwrap(), &vec![int(1); 6][..]);
        cs.push(row(&[1, 0, 0, 0, 0, 0], 0));
        cs.push(row(&[0, 0, 0, 0, 0, 0], 0));
        assert!(feasible(&cs, 6).is_feasible());
        cs.push(row(&[-1, -1, 0, 0, 0, 0], -1));
        let r = feasible(&cs, 6);
        assert!(!r.is_feasible());
        assert!(verify(&cs, 6, &r));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn fourier_motzkin_agrees_with_simplex(
            raw in proptest::collection::vec((proptest::collection::vec(-3i64..4, 3), -4i64..5), 1..8),
        ) {
            let cs: Vec<Constraint> = raw.iter().map(|(c, b)| row(c, *b)).collect();
            let fm = feasible_with(&cs, 3, Method::FourierMotzkin);
            let sx = feasible_with(&cs, 3, Method::Simplex);
            prop_assert!(verify(&cs, 3, &fm));
            prop_assert!(verify(&cs, 3, &sx));
            prop_assert_eq!(fm.is_feasible(), sx.is_feasible());
        }
    }
}
