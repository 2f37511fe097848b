//! `Q_χ`, the comparability relation `χ → χ′`, and maximality.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::attach::{attach_covector, Attachment, DEFAULT_RADIUS};
use crate::covectors::{enumerate_covectors, is_covector, Covector};
use crate::error::{Error, Result};
use crate::exactnum::ParamScalar;
use crate::lattice::{is_unimodular, IntMatrix};
use crate::sign::{format_signs, Sign};

pub type SignVector = Vec<Sign>;

/// Covectors attached to χ, with one witness `α` each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QSet {
    pub covectors: Vec<Covector>,
    /// Keyed by the sign-vector label (e.g. `"+-"`).
    pub witnesses: BTreeMap<String, Vec<ParamScalar>>,
    /// Covectors whose attachment could not be decided within the radius.
    pub inconclusive: Vec<String>,
    pub partial: bool,
}

impl QSet {
    pub fn signs(&self) -> BTreeSet<SignVector> {
        self.covectors.iter().map(|c| c.signs.clone()).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.covectors.iter().map(Covector::label).collect()
    }
}

/// Everything that only depends on `A`, shared across many parameters.
pub struct ParamSpace {
    pub a: IntMatrix,
    pub unimodular: bool,
    pub covectors: Vec<Covector>,
    pub radius: u64,
}

impl ParamSpace {
    pub fn new(a: &IntMatrix) -> Self {
        Self::with_radius(a, DEFAULT_RADIUS)
    }

    pub fn with_radius(a: &IntMatrix, radius: u64) -> Self {
        ParamSpace {
            a: a.clone(),
            unimodular: is_unimodular(a),
            covectors: enumerate_covectors(a),
            radius,
        }
    }

    pub fn decide(&self, signs: &[Sign], chi: &[ParamScalar]) -> Result<Attachment> {
        attach_covector(&self.a, self.unimodular, signs, chi, self.radius)
    }

    pub fn q_set(&self, chi: &[ParamScalar]) -> Result<QSet> {
        let decided: Vec<(Covector, Attachment)> = self
            .covectors
            .par_iter()
            .map(|c| Ok((c.clone(), self.decide(&c.signs, chi)?)))
            .collect::<Result<_>>()?;
        let mut q = QSet {
            covectors: Vec::new(),
            witnesses: BTreeMap::new(),
            inconclusive: Vec::new(),
            partial: false,
        };
        for (c, att) in decided {
            match att {
                Attachment::Attached { witness } => {
                    q.witnesses.insert(c.label(), witness);
                    q.covectors.push(c);
                }
                Attachment::NotAttached => {}
                Attachment::Inconclusive { .. } => {
                    q.inconclusive.push(c.label());
                    q.partial = true;
                }
            }
        }
        Ok(q)
    }

    fn require_unimodular(&self) -> Result<()> {
        if self.unimodular {
            Ok(())
        } else {
            Err(Error::NotUnimodular)
        }
    }

    fn complete_q_set(&self, chi: &[ParamScalar]) -> Result<QSet> {
        let q = self.q_set(chi)?;
        if q.partial {
            return Err(Error::PartialQSet { radius: self.radius });
        }
        Ok(q)
    }

    pub fn chi_arrow(&self, chi: &[ParamScalar], chi2: &[ParamScalar]) -> Result<ArrowDetails> {
        self.require_unimodular()?;
        let integral = integral_difference(chi, chi2);
        let (q1, q2) = (self.complete_q_set(chi)?, self.complete_q_set(chi2)?);
        Ok(arrow_from_sets(integral, &q1.signs(), &q2.signs()))
    }

    /// Search for `θ ∈ X` with `Q_χ ⊊ Q_{χ+θ}`. Exact for `d = 1`.
    pub fn is_maximal(&self, chi: &[ParamScalar], radius: u64) -> Result<Maximality> {
        self.require_unimodular()?;
        let d = self.a.rows();
        let base = self.complete_q_set(chi)?.signs();
        let candidates: Vec<Vec<i64>> = if d == 1 {
            if !chi[0].is_integer() {
                // Every integral shift stays non-integral, and only the zero
                // covector can attach to a non-integral parameter when d = 1.
                return Ok(Maximality::Maximal);
            }
            // Q_χ′ is constant for integer χ′ beyond ±(n+1), so it suffices to
            // look at that window.
            let c = chi[0].rat.to_integer();
            let c = i64::try_from(c).map_err(|_| Error::InternalInconsistency("parameter too large".into()))?;
            let bound = self.a.cols() as i64 + 1;
            let mut ts: Vec<i64> = (-bound..=bound).map(|t| t - c).filter(|t| *t != 0).collect();
            ts.sort_by_key(|t| (t.abs(), *t < 0));
            ts.dedup();
            ts.into_iter().map(|t| vec![t]).collect()
        } else {
            shifts_by_norm(d, radius as i64)
        };
        for theta in candidates {
            let shifted: Vec<ParamScalar> = chi
                .iter()
                .zip(&theta)
                .map(|(c, t)| c.clone() + ParamScalar::from_int(*t))
                .collect();
            let q = self.complete_q_set(&shifted)?.signs();
            if base.is_subset(&q) && base != q {
                return Ok(Maximality::NotMaximal { theta });
            }
        }
        Ok(if d == 1 {
            Maximality::Maximal
        } else {
            Maximality::UnknownWithin { radius }
        })
    }
}

/// Nonzero `θ ∈ [−r, r]^d`, by increasing sup-norm, positive entries first.
fn shifts_by_norm(d: usize, r: i64) -> Vec<Vec<i64>> {
    let mut all: Vec<Vec<i64>> = (0..d)
        .map(|_| -r..=r)
        .multi_cartesian_product()
        .filter(|t| t.iter().any(|x| *x != 0))
        .collect();
    all.sort_by_key(|t| {
        let norm = t.iter().map(|x| x.abs()).max().unwrap_or(0);
        (norm, t.iter().map(|x| (x.abs(), *x < 0)).collect::<Vec<_>>())
    });
    all
}

pub(crate) fn integral_difference(chi: &[ParamScalar], chi2: &[ParamScalar]) -> bool {
    chi.iter().zip(chi2).all(|(a, b)| (a.clone() - b.clone()).is_integer())
}

pub(crate) fn arrow_from_sets(integral: bool, q1: &BTreeSet<SignVector>, q2: &BTreeSet<SignVector>) -> ArrowDetails {
    let missing: Vec<String> = q2.difference(q1).map(|s| format_signs(s)).collect();
    ArrowDetails {
        holds: integral && missing.is_empty(),
        integral_difference: integral,
        missing,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowDetails {
    pub holds: bool,
    pub integral_difference: bool,
    /// Covectors in `Q_χ′` but not in `Q_χ`.
    pub missing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Maximality {
    Maximal,
    NotMaximal { theta: Vec<i64> },
    UnknownWithin { radius: u64 },
}

/// Decide attachment of a sign vector, rejecting non-covectors.
pub fn decide_attached(a: &IntMatrix, signs: &[Sign], chi: &[ParamScalar]) -> Result<Attachment> {
    decide_attached_with_radius(a, signs, chi, DEFAULT_RADIUS)
}

pub fn decide_attached_with_radius(a: &IntMatrix, signs: &[Sign], chi: &[ParamScalar], radius: u64) -> Result<Attachment> {
    if !is_covector(a, signs)?.is_realized() {
        return Err(Error::NotACovector(format_signs(signs)));
    }
    attach_covector(a, is_unimodular(a), signs, chi, radius)
}

pub fn q_set(a: &IntMatrix, chi: &[ParamScalar]) -> Result<QSet> {
    ParamSpace::new(a).q_set(chi)
}

pub fn chi_arrow(a: &IntMatrix, chi: &[ParamScalar], chi2: &[ParamScalar]) -> Result<bool> {
    Ok(ParamSpace::new(a).chi_arrow(chi, chi2)?.holds)
}

pub fn is_maximal(a: &IntMatrix, chi: &[ParamScalar], radius: u64) -> Result<Maximality> {
    ParamSpace::new(a).is_maximal(chi, radius)
}

/// The sign vectors for `A = [1^k, (−1)^{n−k}]`: zero, `+` (λ > 0) and `−`.
pub fn d1_covectors(k: usize, n: usize) -> [SignVector; 3] {
    let plus: SignVector = (0..n).map(|i| if i < k { Sign::Plus } else { Sign::Minus }).collect();
    let minus: SignVector = plus.iter().map(|&s| -s).collect();
    [vec![Sign::Zero; n], plus, minus]
}

/// The published table for `d = 1`, verbatim:
/// `{0}` iff χ ∉ ℤ or χ ∈ {k−n+1, …, n−k−1}; `{0,+}` iff χ ∈ ℤ≥n−k;
/// `{0,−}` iff χ ∈ ℤ≤k−n.
pub fn q_set_d1_closed_form(k: i64, n: i64, chi: &ParamScalar) -> Result<BTreeSet<SignVector>> {
    if n < 2 || k < 1 || k > n - 1 {
        return Err(Error::BadShape { k, n });
    }
    let [zero, plus, minus] = d1_covectors(k as usize, n as usize);
    let mut out = BTreeSet::from([zero]);
    if chi.is_integer() {
        let c = chi.rat.to_integer();
        if c >= BigInt::from(n - k) {
            out.insert(plus);
        } else if c <= BigInt::from(k - n) {
            out.insert(minus);
        }
    }
    Ok(out)
}

/// What the attachment definition itself gives for `d = 1` (derived by
/// solving `Σ α_i a_i = χ` by hand): `+` attaches iff χ ∈ ℤ≥n−k and `−`
/// attaches iff χ ∈ ℤ≤−k. Kept alongside the table because the two differ
/// when `2k ≠ n`.
pub fn q_set_d1_from_definition(k: i64, n: i64, chi: &ParamScalar) -> Result<BTreeSet<SignVector>> {
    if n < 2 || k < 1 || k > n - 1 {
        return Err(Error::BadShape { k, n });
    }
    let [zero, plus, minus] = d1_covectors(k as usize, n as usize);
    let mut out = BTreeSet::from([zero]);
    if chi.is_integer() {
        let c = chi.rat.to_integer();
        if c >= BigInt::from(n - k) {
            out.insert(plus);
        }
        if c <= BigInt::from(-k) {
            out.insert(minus);
        }
    }
    Ok(out)
}

/// `[1^k, (−1)^{n−k}]` as a matrix.
pub fn d1_matrix(k: usize, n: usize) -> IntMatrix {
    let row: Vec<i64> = (0..n).map(|i| if i < k { 1 } else { -1 }).collect();
    IntMatrix::from_i64(&[&row])
}
