//! Membership in ℤ- and ℚ-spans of column subsets.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::rational;
use super::{smith_normal_form, IntMatrix};
use crate::error::{Error, Result};
use crate::exactnum::{bigint_vec, ParamScalar, Rational};

/// Some integer `x` with `m·x = b`, or `None`. `b` may be rational; a
/// non-integral right-hand side simply has no integer solution.
pub fn solve_integer(m: &IntMatrix, b: &[Rational]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len());
    let s = smith_normal_form(m);
    let w: Vec<Rational> = s.u.mul_vec_q(b);
    let diag = s.diagonal();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, wi) in w.iter().enumerate() {
        let di = diag.get(i).cloned().unwrap_or_default();
        if di.is_zero() {
            if !wi.is_zero() {
                return None;
            }
            continue;
        }
        let q = wi / Rational::from_integer(di);
        if !q.is_integer() {
            return None;
        }
        y[i] = q.to_integer();
    }
    Some(s.v.mul_vec(&y))
}

/// Coefficients `c` (aligned with `cols`) such that `Σ c_k a_{cols[k]} = v`
/// over ℚ ⊕ ℚτ, if any.
pub fn in_rational_span(a: &IntMatrix, v: &[ParamScalar], cols: &[usize]) -> Option<Vec<ParamScalar>> {
    let sub = a.select_columns(cols).to_rational();
    let rat: Vec<Rational> = v.iter().map(|x| x.rat.clone()).collect();
    let tau: Vec<Rational> = v.iter().map(|x| x.tau.clone()).collect();
    let r = rational::solve(&sub, cols.len(), &rat)?;
    let t = rational::solve(&sub, cols.len(), &tau)?;
    Some(
        r.particular
            .into_iter()
            .zip(t.particular)
            .map(|(r, t)| ParamScalar::new(r, t))
            .collect(),
    )
}

/// Integer coefficients expressing `v` in the ℤ-span of the chosen columns.
pub fn in_integer_span(a: &IntMatrix, v: &[ParamScalar], cols: &[usize]) -> Result<Option<Vec<BigInt>>> {
    if v.iter().any(|x| !x.is_rational()) {
        return Err(Error::TauPresent);
    }
    let b: Vec<Rational> = v.iter().map(ParamScalar::pr).collect();
    Ok(solve_integer(&a.select_columns(cols), &b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeMembership {
    pub rational_witness: Option<Vec<ParamScalar>>,
    #[serde(with = "opt_bigint_vec")]
    pub integer_witness: Option<Vec<BigInt>>,
}

impl LatticeMembership {
    pub fn in_rational_span(&self) -> bool {
        self.rational_witness.is_some()
    }
    pub fn in_integer_span(&self) -> bool {
        self.integer_witness.is_some()
    }
}

/// Both membership tests at once. Fails with `TauPresent` when `v` has a
/// τ-part, since the ℤ-span question is then meaningless; use
/// [`in_rational_span`] directly for such vectors.
pub fn in_lattice_image(a: &IntMatrix, v: &[ParamScalar], cols: &[usize]) -> Result<LatticeMembership> {
    if v.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: v.len(),
        });
    }
    let integer_witness = in_integer_span(a, v, cols)?;
    Ok(LatticeMembership {
        rational_witness: in_rational_span(a, v, cols),
        integer_witness,
    })
}

mod opt_bigint_vec {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => bigint_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}
