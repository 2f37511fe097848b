//! Deciding whether a covector λ is attached to a parameter χ.
//!
//! λ splits the columns into `P` (positive pairing), `N` (negative) and `Z`
//! (zero). We look for `α` with `Σ α_i a_i = χ`, `α_P ∈ ℤ≥0`, `α_N ∈ ℤ<0`
//! and every `α_Z` non-integral. The search separates into
//!
//! * a base point `v₀ ∈ ℤ^d` with `χ − v₀ ∈ span_ℚ(A_Z)` (a τ-part outside
//!   that span is caught by the lift check, since integers carry no τ);
//! * a lift check: can `A_Z x = χ − v₀` be solved with no integral `x_i`;
//! * an integer program for the signed integer coordinates, which for
//!   unimodular `A` is decided exactly by one LP vertex.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{ParamScalar, Rational};
use crate::lattice::rational::{dot, kernel, primitive_integer, solve, transpose};
use crate::lattice::{solve_integer, IntMatrix};
use crate::lp::{solve_standard_form, StandardForm};
use crate::sign::Sign;

/// Default search radius for non-unimodular matrices.
pub const DEFAULT_RADIUS: u64 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Attachment {
    Attached { witness: Vec<ParamScalar> },
    NotAttached,
    /// Non-unimodular `A`: the LP relaxation is feasible but no integer
    /// point was found with coordinates bounded by `radius`.
    Inconclusive { radius: u64 },
}

impl Attachment {
    pub fn is_attached(&self) -> bool {
        matches!(self, Attachment::Attached { .. })
    }
}

pub(crate) struct Split {
    pub p: Vec<usize>,
    pub n: Vec<usize>,
    pub z: Vec<usize>,
}

pub(crate) fn split(signs: &[Sign]) -> Split {
    let pick = |s: Sign| (0..signs.len()).filter(|&i| signs[i] == s).collect();
    Split {
        p: pick(Sign::Plus),
        n: pick(Sign::Minus),
        z: pick(Sign::Zero),
    }
}

/// Attachment of a sign vector already known to be a covector.
pub(crate) fn attach_covector(
    a: &IntMatrix,
    unimodular: bool,
    signs: &[Sign],
    chi: &[ParamScalar],
    radius: u64,
) -> Result<Attachment> {
    let d = a.rows();
    if chi.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: chi.len(),
        });
    }
    let sp = split(signs);
    let chi_rat: Vec<Rational> = chi.iter().map(|c| c.rat.clone()).collect();

    let Some(v0) = base_point(a, &sp.z, &chi_rat) else {
        return Ok(Attachment::NotAttached);
    };

    if unimodular {
        let Some(lift) = lift_non_integral(a, &sp.z, chi, &v0) else {
            return Ok(Attachment::NotAttached);
        };
        return match integer_part(a, &sp, &v0) {
            IntegerPart::Infeasible => Ok(Attachment::NotAttached),
            IntegerPart::Fractional => Err(Error::InternalInconsistency(
                "LP vertex of a unimodular attachment system is not integral".into(),
            )),
            IntegerPart::Found { gamma, gamma_z } => {
                let mut alpha = vec![ParamScalar::zero(); a.cols()];
                for (i, g) in gamma {
                    alpha[i] = ParamScalar::from(Rational::from_integer(g));
                }
                for (k, &i) in sp.z.iter().enumerate() {
                    alpha[i] = lift[k].clone() + ParamScalar::from(Rational::from_integer(gamma_z[k].clone()));
                }
                finish(a, signs, chi, alpha)
            }
        };
    }

    // Non-unimodular: the relaxation decides infeasibility soundly; an integer
    // point is searched for in a box.
    if matches!(integer_part(a, &sp, &v0), IntegerPart::Infeasible) {
        return Ok(Attachment::NotAttached);
    }
    match bounded_search(a, &sp, chi, radius) {
        Some(alpha) => finish(a, signs, chi, alpha),
        None => Ok(Attachment::Inconclusive { radius }),
    }
}

fn finish(a: &IntMatrix, signs: &[Sign], chi: &[ParamScalar], alpha: Vec<ParamScalar>) -> Result<Attachment> {
    if !validate_witness(a, signs, chi, &alpha) {
        return Err(Error::InternalInconsistency(
            "attachment witness failed re-validation".into(),
        ));
    }
    Ok(Attachment::Attached { witness: alpha })
}

/// Exact check of all three clauses plus `Σ α_i a_i = χ`.
pub fn validate_witness(a: &IntMatrix, signs: &[Sign], chi: &[ParamScalar], alpha: &[ParamScalar]) -> bool {
    if alpha.len() != a.cols() || chi.len() != a.rows() || signs.len() != a.cols() {
        return false;
    }
    let clauses = alpha.iter().zip(signs).all(|(x, s)| match s {
        Sign::Plus => x.is_integer() && !x.rat.is_negative(),
        Sign::Minus => x.is_integer() && x.rat.is_negative(),
        Sign::Zero => !x.is_integer(),
    });
    clauses && combine(a, alpha) == chi
}

/// `Σ α_i a_i`.
pub fn combine(a: &IntMatrix, alpha: &[ParamScalar]) -> Vec<ParamScalar> {
    (0..a.rows())
        .map(|r| {
            alpha
                .iter()
                .zip(&a.entries()[r])
                .fold(ParamScalar::zero(), |acc, (x, aij)| {
                    acc + x.scale(&Rational::from_integer(aij.clone()))
                })
        })
        .collect()
}

/// Integer rows spanning the annihilator of `span(A_Z)`.
fn annihilator(a: &IntMatrix, z: &[usize]) -> Vec<Vec<BigInt>> {
    let d = a.rows();
    if z.is_empty() {
        return (0..d)
            .map(|k| (0..d).map(|r| BigInt::from((r == k) as i64)).collect())
            .collect();
    }
    let rows: Vec<Vec<Rational>> = z.iter().map(|&i| a.column_q(i)).collect();
    kernel(&rows, d).iter().map(|v| primitive_integer(v)).collect()
}

/// Some `v₀ ∈ ℤ^d` with `χ^ρ − v₀ ∈ span_ℚ(A_Z)`.
pub(crate) fn base_point(a: &IntMatrix, z: &[usize], chi_rat: &[Rational]) -> Option<Vec<BigInt>> {
    let d = a.rows();
    let q = annihilator(a, z);
    if q.is_empty() {
        return Some(vec![BigInt::zero(); d]);
    }
    let qm = IntMatrix::from_entries_unchecked(q);
    let rhs = qm.mul_vec_q(chi_rat);
    solve_integer(&qm, &rhs)
}

/// A solution of `A_Z x = χ − v₀` over ℚ ⊕ ℚτ with no integral coordinate,
/// if one exists. Coordinates that are constant on the solution space must
/// be non-integral; the others are pushed off ℤ by a small generic step.
pub(crate) fn lift_non_integral(
    a: &IntMatrix,
    z: &[usize],
    chi: &[ParamScalar],
    v0: &[BigInt],
) -> Option<Vec<ParamScalar>> {
    let sub = a.select_columns(z).to_rational();
    let rhs_rat: Vec<Rational> = chi
        .iter()
        .zip(v0)
        .map(|(c, v)| &c.rat - Rational::from_integer(v.clone()))
        .collect();
    let rhs_tau: Vec<Rational> = chi.iter().map(|c| c.tau.clone()).collect();
    let r = solve(&sub, z.len(), &rhs_rat)?;
    let t = solve(&sub, z.len(), &rhs_tau)?;
    if z.is_empty() {
        return Some(Vec::new());
    }
    let k = r.kernel.len();
    let kt = transpose(&r.kernel, z.len()); // row i: coefficients of coordinate i
    let moving: Vec<bool> = kt.iter().map(|row| row.iter().any(|x| !x.is_zero())).collect();
    for i in 0..z.len() {
        if !moving[i] && t.particular[i].is_zero() && r.particular[i].is_integer() {
            return None;
        }
    }
    // Direction g with (K g)_i ≠ 0 on every moving coordinate: g = (1, s, s², …)
    // for the first s avoiding the finitely many roots.
    let g = (1i64..)
        .map(|s| {
            let mut pw = Rational::one();
            (0..k)
                .map(|_| {
                    let cur = pw.clone();
                    pw *= Rational::from_integer(s.into());
                    cur
                })
                .collect::<Vec<_>>()
        })
        .find(|g| (0..z.len()).all(|i| !moving[i] || !dot(&kt[i], g).is_zero()))
        .expect("a polynomial with finitely many roots");
    let slope: Vec<Rational> = (0..z.len()).map(|i| if moving[i] { dot(&kt[i], &g) } else { Rational::zero() }).collect();
    // Step 1/q along g, for the first q leaving every rational coordinate off ℤ.
    let step = (2i64..)
        .map(|q| Rational::new(BigInt::one(), BigInt::from(q)))
        .find(|s| {
            (0..z.len()).all(|i| {
                !t.particular[i].is_zero() || !(&r.particular[i] + &slope[i] * s).is_integer()
            })
        })
        .expect("only finitely many bad steps");
    Some(
        (0..z.len())
            .map(|i| ParamScalar::new(&r.particular[i] + &slope[i] * &step, t.particular[i].clone()))
            .collect(),
    )
}

enum IntegerPart {
    Infeasible,
    /// The LP vertex was not integral (impossible for unimodular input).
    Fractional,
    Found {
        gamma: Vec<(usize, BigInt)>,
        gamma_z: Vec<BigInt>,
    },
}

/// Integers `γ_P ≥ 0`, `γ_N ≤ −1`, `γ_Z` with
/// `A_P γ_P + A_N γ_N + A_Z γ_Z = v₀`, via the standard-form system
/// `[A_P, −A_N, A_Z, −A_Z] z = v₀ + A_N·1`, `z ≥ 0`.
fn integer_part(a: &IntMatrix, sp: &Split, v0: &[BigInt]) -> IntegerPart {
    let d = a.rows();
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    cols.extend(sp.p.iter().map(|&i| a.column_q(i)));
    cols.extend(sp.n.iter().map(|&i| a.column_q(i).into_iter().map(|x| -x).collect()));
    cols.extend(sp.z.iter().map(|&i| a.column_q(i)));
    cols.extend(sp.z.iter().map(|&i| a.column_q(i).into_iter().map(|x| -x).collect()));
    let m = transpose(&cols, d);
    let mut rhs: Vec<Rational> = v0.iter().map(|v| Rational::from_integer(v.clone())).collect();
    for &i in &sp.n {
        for (r, x) in rhs.iter_mut().zip(a.column_q(i)) {
            *r += x;
        }
    }
    let z = match solve_standard_form(&m, cols.len(), &rhs) {
        StandardForm::Infeasible(_) => return IntegerPart::Infeasible,
        StandardForm::Vertex(z) => z,
    };
    if z.iter().any(|x| !x.is_integer()) {
        return IntegerPart::Fractional;
    }
    let z: Vec<BigInt> = z.into_iter().map(|x| x.to_integer()).collect();
    let (np, nn, nz) = (sp.p.len(), sp.n.len(), sp.z.len());
    let mut gamma = Vec::new();
    for (k, &i) in sp.p.iter().enumerate() {
        gamma.push((i, z[k].clone()));
    }
    for (k, &i) in sp.n.iter().enumerate() {
        gamma.push((i, -BigInt::one() - &z[np + k]));
    }
    let gamma_z = (0..nz).map(|k| &z[np + nn + k] - &z[np + nn + nz + k]).collect();
    IntegerPart::Found { gamma, gamma_z }
}

/// Enumerate `γ_P ∈ [0, R]`, `γ_N ∈ [−R, −1]` and test the remainder with
/// the lift check.
fn bounded_search(a: &IntMatrix, sp: &Split, chi: &[ParamScalar], radius: u64) -> Option<Vec<ParamScalar>> {
    let r = radius as i64;
    let ranges: Vec<Vec<i64>> = sp
        .p
        .iter()
        .map(|_| (0..=r).collect())
        .chain(sp.n.iter().map(|_| (-r..=-1).collect()))
        .collect();
    let signed: Vec<usize> = sp.p.iter().chain(&sp.n).copied().collect();
    let combos: Box<dyn Iterator<Item = Vec<i64>>> = if ranges.is_empty() {
        Box::new(std::iter::once(Vec::new()))
    } else {
        use itertools::Itertools;
        Box::new(ranges.into_iter().multi_cartesian_product())
    };
    for gamma in combos {
        let mut rest: Vec<ParamScalar> = chi.to_vec();
        for (&i, &g) in signed.iter().zip(&gamma) {
            for (row, x) in rest.iter_mut().zip(a.column(i)) {
                *row = row.clone() - ParamScalar::from(Rational::from_integer(x * g));
            }
        }
        let zero = vec![BigInt::zero(); a.rows()];
        if let Some(lift) = lift_non_integral(a, &sp.z, &rest, &zero) {
            let mut alpha = vec![ParamScalar::zero(); a.cols()];
            for (&i, &g) in signed.iter().zip(&gamma) {
                alpha[i] = ParamScalar::from_int(g);
            }
            for (k, &i) in sp.z.iter().enumerate() {
                alpha[i] = lift[k].clone();
            }
            return Some(alpha);
        }
    }
    None
}
