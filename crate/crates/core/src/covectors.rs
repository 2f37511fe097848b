//! Covectors of the oriented matroid of `A`: sign vectors
//! `(sign⟨λ, a_i⟩)_i` realized by some `λ ∈ ℚ^d`.
//!
//! Enumeration walks the flats of the column matroid. For a flat `F` the
//! forms `a_j`, `j ∉ F`, restrict to a central arrangement on
//! `L_F = {λ : ⟨λ, a_i⟩ = 0, i ∈ F}`, whose open regions are found by
//! inserting hyperplanes one at a time. Each region gives one covector with
//! zero set exactly `F`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{bigint_vec, int, rational_vec_str, Rational};
use crate::lattice::rational::{dot, kernel, primitive_integer, rank};
use crate::lattice::IntMatrix;
use crate::lp::{feasible, Constraint, LpResult};
use crate::sign::{format_signs, signs_str, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Covector {
    #[serde(with = "signs_str")]
    pub signs: Vec<Sign>,
    #[serde(with = "bigint_vec")]
    pub witness: Vec<BigInt>,
}

impl Covector {
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&i| self.signs[i] == Sign::Zero).collect()
    }

    pub fn label(&self) -> String {
        format_signs(&self.signs)
    }

    /// Exact re-check of the witness.
    pub fn validates(&self, a: &IntMatrix) -> bool {
        self.witness.len() == a.rows()
            && (0..a.cols()).all(|j| {
                let p: BigInt = a.column(j).iter().zip(&self.witness).map(|(x, y)| x * y).sum();
                Sign::of_int(&p) == self.signs[j]
            })
    }
}

/// Sign vector realized by an integer λ.
pub fn signs_of(a: &IntMatrix, lambda: &[BigInt]) -> Vec<Sign> {
    (0..a.cols())
        .map(|j| {
            let p: BigInt = a.column(j).iter().zip(lambda).map(|(x, y)| x * y).sum();
            Sign::of_int(&p)
        })
        .collect()
}

pub fn enumerate_covectors(a: &IntMatrix) -> Vec<Covector> {
    let flats = flats(a);
    let found: Vec<Vec<Covector>> = flats.par_iter().map(|f| covectors_with_zero_set(a, f)).collect();
    let mut all: BTreeMap<Vec<Sign>, Covector> = BTreeMap::new();
    for c in found.into_iter().flatten() {
        all.entry(c.signs.clone()).or_insert(c);
    }
    all.into_values().collect()
}

/// Closure of a column set in the matroid of `A`.
fn closure(a: &IntMatrix, set: &[usize]) -> Vec<usize> {
    let cols: Vec<Vec<Rational>> = set.iter().map(|&j| a.column_q(j)).collect();
    let r = rank(&cols);
    (0..a.cols())
        .filter(|j| {
            if set.contains(j) {
                return true;
            }
            let mut ext = cols.clone();
            ext.push(a.column_q(*j));
            rank(&ext) == r
        })
        .collect()
}

/// All flats, by breadth-first search over closures.
pub fn flats(a: &IntMatrix) -> Vec<Vec<usize>> {
    let start = closure(a, &[]);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(f) = queue.pop_front() {
        for j in (0..a.cols()).filter(|j| !f.contains(j)) {
            let mut g = f.clone();
            g.push(j);
            let c = closure(a, &g);
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    seen.into_iter().collect()
}

fn covectors_with_zero_set(a: &IntMatrix, flat: &[usize]) -> Vec<Covector> {
    let d = a.rows();
    let rows: Vec<Vec<Rational>> = flat.iter().map(|&i| a.column_q(i)).collect();
    // Basis of L_F, as vectors in ℚ^d.
    let basis: Vec<Vec<Rational>> = if rows.is_empty() {
        (0..d)
            .map(|k| (0..d).map(|r| if r == k { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        kernel(&rows, d)
    };
    let k = basis.len();
    let rest: Vec<usize> = (0..a.cols()).filter(|j| !flat.contains(j)).collect();
    // Restricted forms on ℚ^k.
    let forms: Vec<Vec<Rational>> = rest
        .iter()
        .map(|&j| {
            let aj = a.column_q(j);
            basis.iter().map(|w| dot(w, &aj)).collect()
        })
        .collect();

    regions(&forms, k)
        .into_iter()
        .map(|(region_signs, y)| {
            let mut lambda = vec![Rational::zero(); d];
            for (w, yk) in basis.iter().zip(&y) {
                for (l, wi) in lambda.iter_mut().zip(w) {
                    *l += wi * yk;
                }
            }
            let mut signs = vec![Sign::Zero; a.cols()];
            for (&j, s) in rest.iter().zip(region_signs) {
                signs[j] = s;
            }
            let c = Covector {
                signs,
                witness: primitive_integer(&lambda),
            };
            debug_assert!(c.validates(a));
            c
        })
        .collect()
}

/// Open regions of the central arrangement `{y : ⟨f, y⟩ = 0}` in ℚ^k, as
/// sign vectors with interior witnesses. With no forms the single region is
/// all of ℚ^k (witnessed by the origin).
fn regions(forms: &[Vec<Rational>], k: usize) -> Vec<(Vec<Sign>, Vec<Rational>)> {
    let mut current: Vec<(Vec<Sign>, Vec<Rational>)> = vec![(Vec::new(), vec![Rational::zero(); k])];
    for (idx, f) in forms.iter().enumerate() {
        let mut next = Vec::new();
        for (signs, y) in current {
            let base: Vec<Constraint> = signs
                .iter()
                .zip(forms)
                .map(|(s, g)| strict(g, *s))
                .collect();
            let v = dot(f, &y);
            for side in [Sign::Plus, Sign::Minus] {
                // The current witness already sits strictly on one side.
                let witness = if Sign::of(&v) == side {
                    Some(y.clone())
                } else {
                    let mut cs = base.clone();
                    cs.push(strict(f, side));
                    match feasible(&cs, k) {
                        LpResult::Feasible { point } => Some(point),
                        LpResult::Infeasible { .. } => None,
                    }
                };
                if let Some(w) = witness {
                    let mut s = signs.clone();
                    s.push(side);
                    next.push((s, w));
                }
            }
        }
        current = next;
        debug_assert!(current.iter().all(|(s, _)| s.len() == idx + 1));
    }
    current
}

/// `⟨f, y⟩ ≥ 1` or `≤ −1`; homogeneous, so this is equivalent to strictness.
fn strict(f: &[Rational], s: Sign) -> Constraint {
    match s {
        Sign::Plus => Constraint::ge(f.to_vec(), int(1)),
        Sign::Minus => Constraint::le(f.to_vec(), int(-1)),
        Sign::Zero => unreachable!("regions are open"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovectorCheck {
    Realized {
        #[serde(with = "bigint_vec")]
        witness: Vec<BigInt>,
    },
    /// Farkas vector over the system rows: one row per `+`/`−` entry, two
    /// (`≥ 0`, `≤ 0`) per `0` entry, in column order.
    Refuted {
        #[serde(with = "rational_vec_str")]
        farkas: Vec<Rational>,
    },
}

impl CovectorCheck {
    pub fn is_realized(&self) -> bool {
        matches!(self, CovectorCheck::Realized { .. })
    }
}

pub fn is_covector(a: &IntMatrix, s: &[Sign]) -> Result<CovectorCheck> {
    if s.len() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            got: s.len(),
        });
    }
    let mut cs = Vec::new();
    for (j, sj) in s.iter().enumerate() {
        let aj = a.column_q(j);
        match sj {
            Sign::Zero => cs.extend(Constraint::eq(aj, Rational::zero())),
            _ => cs.push(strict(&aj, *sj)),
        }
    }
    Ok(match feasible(&cs, a.rows()) {
        LpResult::Feasible { point } => CovectorCheck::Realized {
            witness: primitive_integer(&point),
        },
        LpResult::Infeasible { farkas } => CovectorCheck::Refuted { farkas },
    })
}

/// Test oracle: filter all `3^n` sign vectors through [`is_covector`].
pub fn covectors_brute_force(a: &IntMatrix) -> Vec<Vec<Sign>> {
    let n = a.cols();
    (0..n)
        .map(|_| [Sign::Minus, Sign::Zero, Sign::Plus])
        .multi_cartesian_product()
        .chain(std::iter::once(Vec::new()).filter(|_| n == 0))
        .filter(|s| is_covector(a, s).map(|c| c.is_realized()).unwrap_or(false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign::parse_signs;
    use proptest::prelude::*;

    fn labels(a: &IntMatrix) -> Vec<String> {
        enumerate_covectors(a).iter().map(Covector::label).collect()
    }

    #[test]
    fn single_row_opposite() {
        assert_eq!(labels(&IntMatrix::from_i64(&[&[1, -1]])), vec!["-+", "00", "+-"]);
    }

    #[test]
    fn single_row_repeated() {
        assert_eq!(labels(&IntMatrix::from_i64(&[&[1, 1]])), vec!["--", "00", "++"]);
    }

    #[test]
    fn cyclic_quiver_has_thirteen() {
        let a = IntMatrix::from_i64(&[&[1, 0, -1], &[0, 1, -1]]);
        let cs = enumerate_covectors(&a);
        assert_eq!(cs.len(), 13);
        assert!(cs.iter().all(|c| c.validates(&a)));
    }

    #[test]
    fn is_covector_examples() {
        let a = IntMatrix::from_i64(&[&[1, -1]]);
        assert!(!is_covector(&a, &parse_signs("++").unwrap()).unwrap().is_realized());
        assert_eq!(
            is_covector(&a, &parse_signs("00").unwrap()).unwrap(),
            CovectorCheck::Realized { witness: vec![BigInt::zero()] }
        );
        let c = IntMatrix::from_i64(&[&[1, 0, -1], &[0, 1, -1]]);
        let s = parse_signs("++-").unwrap();
        match is_covector(&c, &s).unwrap() {
            CovectorCheck::Realized { witness } => assert_eq!(signs_of(&c, &witness), s),
            other => panic!("{other:?}"),
        }
        assert!(is_covector(&a, &parse_signs("+").unwrap()).is_err());
    }

    #[test]
    fn zero_and_full_flats() {
        let a = IntMatrix::from_i64(&[&[1, 0, -1], &[0, 1, -1]]);
        let f = flats(&a);
        assert!(f.contains(&vec![]));
        assert!(f.contains(&vec![0, 1, 2]));
        assert_eq!(f.len(), 5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn enumeration_matches_brute_force(entries in proptest::collection::vec(-2i64..3, 8)) {
            let rows: Vec<&[i64]> = entries.chunks(4).collect();
            let a = IntMatrix::from_i64(&rows);
            let fast: Vec<Vec<Sign>> = enumerate_covectors(&a).into_iter().map(|c| c.signs).collect();
            let mut slow = covectors_brute_force(&a);
            slow.sort();
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn closed_under_negation(entries in proptest::collection::vec(-2i64..3, 9)) {
            let rows: Vec<&[i64]> = entries.chunks(3).collect();
            let a = IntMatrix::from_i64(&rows);
            let set: BTreeSet<Vec<Sign>> = enumerate_covectors(&a).into_iter().map(|c| c.signs).collect();
            for s in &set {
                let neg: Vec<Sign> = s.iter().map(|&x| -x).collect();
                prop_assert!(set.contains(&neg));
            }
        }
    }
}
