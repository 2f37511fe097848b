//! GIT walls, chambers, effectivity and semistability of points of T*V.
//!
//! A point `p = (x, y)` of T*V has weights `+a_i` on `x_i` and `−a_i` on
//! `y_i`. It is δ-semistable iff δ lies in the rational cone spanned by the
//! weights of its nonzero coordinates. Both answers come with a certificate:
//! a nonnegative combination, or a one-parameter subgroup λ with `⟨λ,δ⟩ < 0`
//! and `⟨λ,w⟩ ≥ 0` on every supported weight.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactnum::{bigint_vec, int, rational_vec_str, Rational};
use crate::lattice::rational::{primitive_integer, sign_normalize};
use crate::lattice::{determinant, IntMatrix};
use crate::lp::{feasible, Constraint, LpResult};
use crate::sign::{format_signs, signs_str, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FanSource {
    /// Δ(T, V): walls are the cones `Σ_{i∈J} ℚ≥0·a_i`, support `Σ ℚ≥0·a_i`.
    FanOnV,
    /// Δ(T, μ⁻¹(0)): walls are the full hyperplanes `Σ_{i∈J} ℚ·a_i`.
    FanOnMomentFiber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    #[serde(with = "bigint_vec")]
    pub normal: Vec<BigInt>,
    /// Columns lying on the hyperplane (0-based). For `FanOnV` these generate
    /// the wall cone.
    pub columns: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallArrangement {
    pub d: usize,
    pub source: FanSource,
    pub walls: Vec<Wall>,
    /// `FanOnV` only: the support is the cone over these columns (all of them).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support_columns: Option<Vec<usize>>,
}

impl WallArrangement {
    pub fn normals(&self) -> Vec<Vec<BigInt>> {
        self.walls.iter().map(|w| w.normal.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }
}

/// Wall hyperplanes: spans of rank-(d−1) column subsets, as primitive
/// normals with positive first nonzero entry, deduplicated and sorted.
pub fn wall_hyperplanes(a: &IntMatrix, source: FanSource) -> WallArrangement {
    let d = a.rows();
    let normals: BTreeSet<Vec<BigInt>> = if d == 1 {
        // J = ∅ spans the zero subspace, which is the hyperplane of ℚ¹.
        std::iter::once(vec![BigInt::one()]).collect()
    } else {
        let subsets: Vec<Vec<usize>> = (0..a.cols()).combinations(d - 1).collect();
        subsets
            .par_iter()
            .filter_map(|s| hyperplane_normal(a, s))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    };
    let walls = normals
        .into_iter()
        .map(|normal| {
            let columns = (0..a.cols())
                .filter(|&j| pair_int(&normal, &a.column(j)).is_zero())
                .collect();
            Wall { normal, columns }
        })
        .collect();
    WallArrangement {
        d,
        source,
        walls,
        support_columns: (source == FanSource::FanOnV).then(|| (0..a.cols()).collect()),
    }
}

/// Normal of the span of `d−1` columns via cofactors, or `None` if they are
/// dependent.
fn hyperplane_normal(a: &IntMatrix, cols: &[usize]) -> Option<Vec<BigInt>> {
    let m = a.select_columns(cols);
    let d = a.rows();
    let mut normal: Vec<BigInt> = (0..d)
        .map(|k| {
            let minor_rows: Vec<Vec<BigInt>> = (0..d)
                .filter(|&r| r != k)
                .map(|r| m.entries()[r].clone())
                .collect();
            let det = determinant(&IntMatrix::from_entries_unchecked(minor_rows));
            if k % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect();
    if normal.iter().all(Zero::is_zero) {
        return None;
    }
    let q: Vec<Rational> = normal.iter().map(|x| Rational::from_integer(x.clone())).collect();
    normal = primitive_integer(&q);
    sign_normalize(&mut normal);
    Some(normal)
}

fn pair_int(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn pair_q(u: &[BigInt], v: &[Rational]) -> Rational {
    u.iter()
        .zip(v)
        .map(|(a, b)| b * Rational::from_integer(a.clone()))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chamber {
    #[serde(with = "signs_str")]
    pub signs: Vec<Sign>,
    /// A point realizing the sign vector.
    #[serde(with = "rational_vec_str")]
    pub witness: Vec<Rational>,
}

impl Chamber {
    pub fn contains(&self, walls: &WallArrangement, v: &[Rational]) -> bool {
        matches!(chamber_of(v, walls), ChamberResult::Chamber(c) if c.signs == self.signs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChamberResult {
    Chamber(Chamber),
    /// Indices (0-based, into the arrangement) of the walls containing δ.
    OnWall { walls: Vec<usize> },
}

pub fn chamber_of(delta: &[Rational], walls: &WallArrangement) -> ChamberResult {
    let pairings: Vec<Rational> = walls.walls.iter().map(|w| pair_q(&w.normal, delta)).collect();
    let zeros: Vec<usize> = (0..pairings.len()).filter(|&i| pairings[i].is_zero()).collect();
    if !zeros.is_empty() {
        return ChamberResult::OnWall { walls: zeros };
    }
    ChamberResult::Chamber(Chamber {
        signs: pairings.iter().map(Sign::of).collect(),
        witness: delta.to_vec(),
    })
}

pub fn is_generic(delta: &[Rational], walls: &WallArrangement) -> bool {
    matches!(chamber_of(delta, walls), ChamberResult::Chamber(_))
}

/// Membership of `target` in the cone over `generators`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeCertificate {
    /// `target = Σ c_k · generators[k]`, all `c_k ≥ 0`.
    Inside {
        #[serde(with = "rational_vec_str")]
        coefficients: Vec<Rational>,
    },
    /// `⟨λ, g⟩ ≥ 0` for every generator and `⟨λ, target⟩ < 0`.
    Separated {
        #[serde(with = "bigint_vec")]
        lambda: Vec<BigInt>,
    },
}

impl ConeCertificate {
    pub fn is_inside(&self) -> bool {
        matches!(self, ConeCertificate::Inside { .. })
    }
}

/// Decide `target ∈ cone(generators)` by exact LP duality in λ-space.
pub fn cone_membership(generators: &[Vec<Rational>], target: &[Rational]) -> ConeCertificate {
    let d = target.len();
    let mut cs: Vec<Constraint> = generators
        .iter()
        .map(|g| Constraint::ge(g.clone(), Rational::zero()))
        .collect();
    cs.push(Constraint::le(target.to_vec(), int(-1)));
    match feasible(&cs, d) {
        LpResult::Feasible { point } => ConeCertificate::Separated {
            lambda: primitive_integer(&point),
        },
        LpResult::Infeasible { farkas } => {
            // Σ y_k g_k − y_t · target = 0 with y_t > 0.
            let yt = farkas[generators.len()].clone();
            ConeCertificate::Inside {
                coefficients: farkas[..generators.len()].iter().map(|y| y / &yt).collect(),
            }
        }
    }
}

/// δ ∈ Σ ℚ≥0·a_i.
pub fn effective(a: &IntMatrix, delta: &[Rational]) -> bool {
    effective_certificate(a, delta).is_inside()
}

pub fn effective_certificate(a: &IntMatrix, delta: &[Rational]) -> ConeCertificate {
    let gens: Vec<Vec<Rational>> = (0..a.cols()).map(|j| a.column_q(j)).collect();
    cone_membership(&gens, delta)
}

/// Semistability verdict for a point of T*V.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Semistability {
    /// `δ = Σ x_coeffs[i]·a_i − Σ y_coeffs[i]·a_i` with coefficients ≥ 0 and
    /// supported on the nonzero coordinates.
    Semistable {
        #[serde(with = "rational_vec_str")]
        x_coeffs: Vec<Rational>,
        #[serde(with = "rational_vec_str")]
        y_coeffs: Vec<Rational>,
    },
    Unstable {
        #[serde(with = "bigint_vec")]
        lambda: Vec<BigInt>,
    },
}

impl Semistability {
    pub fn is_semistable(&self) -> bool {
        matches!(self, Semistability::Semistable { .. })
    }
}

/// Weights `(index, is_y, weight)` of the nonzero coordinates of `(x, y)`.
fn supported_weights(a: &IntMatrix, x: &[Rational], y: &[Rational]) -> Vec<(usize, bool, Vec<Rational>)> {
    let mut out = Vec::new();
    for i in 0..a.cols() {
        if !x[i].is_zero() {
            out.push((i, false, a.column_q(i)));
        }
        if !y[i].is_zero() {
            out.push((i, true, a.column_q(i).into_iter().map(|v| -v).collect()));
        }
    }
    out
}

pub fn semistable_point(a: &IntMatrix, x: &[Rational], y: &[Rational], delta: &[Rational]) -> Semistability {
    assert_eq!(x.len(), a.cols());
    assert_eq!(y.len(), a.cols());
    let weights = supported_weights(a, x, y);
    let gens: Vec<Vec<Rational>> = weights.iter().map(|(_, _, w)| w.clone()).collect();
    match cone_membership(&gens, delta) {
        ConeCertificate::Separated { lambda } => Semistability::Unstable { lambda },
        ConeCertificate::Inside { coefficients } => {
            let mut xc = vec![Rational::zero(); a.cols()];
            let mut yc = vec![Rational::zero(); a.cols()];
            for ((i, is_y, _), c) in weights.iter().zip(coefficients) {
                if *is_y {
                    yc[*i] = c;
                } else {
                    xc[*i] = c;
                }
            }
            Semistability::Semistable {
                x_coeffs: xc,
                y_coeffs: yc,
            }
        }
    }
}

/// Re-check a semistability certificate exactly.
pub fn verify_semistability(
    a: &IntMatrix,
    x: &[Rational],
    y: &[Rational],
    delta: &[Rational],
    cert: &Semistability,
) -> bool {
    match cert {
        Semistability::Semistable { x_coeffs, y_coeffs } => {
            // nonnegative, and zero on zero coordinates
            let ok = |c: &Rational, coord: &Rational| !c.is_negative() && (c.is_zero() || !coord.is_zero());
            let support_ok = (0..a.cols()).all(|i| ok(&x_coeffs[i], &x[i]) && ok(&y_coeffs[i], &y[i]));
            let diff: Vec<Rational> = x_coeffs.iter().zip(y_coeffs).map(|(p, q)| p - q).collect();
            support_ok && a.mul_vec_q(&diff) == delta
        }
        Semistability::Unstable { lambda } => {
            pair_q(lambda, delta) < Rational::zero()
                && supported_weights(a, x, y)
                    .iter()
                    .all(|(_, _, w)| pair_q(lambda, w) >= Rational::zero())
        }
    }
}

/// `π_I(p)`: zero `x_i` for `i ∈ I` and `y_i` for `i ∉ I`.
pub fn extended_core_projection(x: &[Rational], y: &[Rational], in_i: &[bool]) -> (Vec<Rational>, Vec<Rational>) {
    let px = x
        .iter()
        .zip(in_i)
        .map(|(v, &inside)| if inside { Rational::zero() } else { v.clone() })
        .collect();
    let py = y
        .iter()
        .zip(in_i)
        .map(|(v, &inside)| if inside { v.clone() } else { Rational::zero() })
        .collect();
    (px, py)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanCounterexample {
    #[serde(with = "rational_vec_str")]
    pub delta: Vec<Rational>,
    #[serde(with = "rational_vec_str")]
    pub x: Vec<Rational>,
    #[serde(with = "rational_vec_str")]
    pub y: Vec<Rational>,
    pub semistable: bool,
    pub some_projection_semistable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanEqualityReport {
    pub points_checked: usize,
    /// Points where `p` semistable ⇎ some `π_I(p)` semistable, or where the
    /// projection read off the certificate fails.
    pub counterexamples: Vec<FanCounterexample>,
    /// Informational: points where taking `I` = y-support of `p` gives a
    /// different verdict from `p` itself. That choice of `I` is not
    /// sufficient in general.
    pub y_support_rule_disagreements: usize,
}

/// Largest n for which all `2^n` projections are tried.
const EXHAUSTIVE_PROJECTION_MAX_N: usize = 14;

/// Sample random points and compare `p ∈ (T*V)^ss_δ` with
/// `∃ I: π_I(p) ∈ (T*V)^ss_δ`.
pub fn fan_equality_check(a: &IntMatrix, samples: &[Vec<Rational>], points_per_sample: usize, seed: u64) -> FanEqualityReport {
    let n = a.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    for delta in samples {
        for _ in 0..points_per_sample {
            let x = random_sparse_vector(&mut rng, n);
            let y = random_sparse_vector(&mut rng, n);
            points.push((delta.clone(), x, y));
        }
    }
    let results: Vec<(Option<FanCounterexample>, bool)> = points
        .par_iter()
        .map(|(delta, x, y)| check_point(a, delta, x, y))
        .collect();
    FanEqualityReport {
        points_checked: results.len(),
        y_support_rule_disagreements: results.iter().filter(|(_, dis)| *dis).count(),
        counterexamples: results.into_iter().filter_map(|(c, _)| c).collect(),
    }
}

fn check_point(a: &IntMatrix, delta: &[Rational], x: &[Rational], y: &[Rational]) -> (Option<FanCounterexample>, bool) {
    let n = a.cols();
    let lhs = semistable_point(a, x, y, delta);
    let mut rhs = false;
    let mut consistent = true;
    if let Semistability::Semistable { x_coeffs, y_coeffs } = &lhs {
        let in_i: Vec<bool> = (0..n).map(|i| y_coeffs[i] > x_coeffs[i]).collect();
        let (px, py) = extended_core_projection(x, y, &in_i);
        rhs = semistable_point(a, &px, &py, delta).is_semistable();
        consistent = rhs;
    }
    if n <= EXHAUSTIVE_PROJECTION_MAX_N {
        let exhaustive = (0u64..1 << n).any(|mask| {
            let in_i: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let (px, py) = extended_core_projection(x, y, &in_i);
            semistable_point(a, &px, &py, delta).is_semistable()
        });
        rhs |= exhaustive;
    }
    let y_rule = {
        let in_i: Vec<bool> = y.iter().map(|v| !v.is_zero()).collect();
        let (px, py) = extended_core_projection(x, y, &in_i);
        semistable_point(a, &px, &py, delta).is_semistable()
    };
    let lhs_ss = lhs.is_semistable();
    let bad = lhs_ss != rhs || !consistent;
    let cex = bad.then(|| FanCounterexample {
        delta: delta.to_vec(),
        x: x.to_vec(),
        y: y.to_vec(),
        semistable: lhs_ss,
        some_projection_semistable: rhs,
    });
    (cex, y_rule != lhs_ss)
}

fn random_sparse_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                Rational::zero()
            } else {
                let mut num: i64 = rng.gen_range(1..=5);
                if rng.gen_bool(0.5) {
                    num = -num;
                }
                Rational::new(num.into(), rng.gen_range(1i64..=3).into())
            }
        })
        .collect()
}

/// The finite family of destabilizing one-parameter subgroups: one Farkas
/// witness per unstable support pattern (each `x_i`, `y_i` zero or not),
/// keyed by the pattern string (`x` pattern then `y` pattern, `1` = nonzero).
/// Enumerates `4^n` patterns, so only meant for small `n`.
pub fn destabilizing_family(a: &IntMatrix, delta: &[Rational]) -> BTreeMap<String, Vec<BigInt>> {
    let n = a.cols();
    let patterns: Vec<u64> = (0u64..1 << (2 * n)).collect();
    patterns
        .par_iter()
        .filter_map(|&mask| {
            let x: Vec<Rational> = (0..n).map(|i| int((mask >> i & 1) as i64)).collect();
            let y: Vec<Rational> = (0..n).map(|i| int((mask >> (n + i) & 1) as i64)).collect();
            match semistable_point(a, &x, &y, delta) {
                Semistability::Unstable { lambda } => {
                    let key: String = x.iter().chain(&y).map(|v| if v.is_zero() { '0' } else { '1' }).collect();
                    Some((key, lambda))
                }
                Semistability::Semistable { .. } => None,
            }
        })
        .collect()
}

/// Enumerate the chambers (open regions) of a wall arrangement as sign
/// vectors, each with a witness. Uses the covector enumeration of the
/// arrangement whose "columns" are the wall normals.
pub fn chambers(walls: &WallArrangement) -> Vec<Chamber> {
    let normals = IntMatrix::from_entries_unchecked(
        (0..walls.d)
            .map(|r| walls.walls.iter().map(|w| w.normal[r].clone()).collect())
            .collect(),
    );
    crate::covectors::enumerate_covectors(&normals)
        .into_iter()
        .filter(|c| c.signs.iter().all(|s| *s != Sign::Zero))
        .map(|c| Chamber {
            signs: c.signs,
            witness: c.witness.iter().map(|v| Rational::from_integer(v.clone())).collect(),
        })
        .collect()
}

/// Human-readable summary of a chamber result.
pub fn describe(result: &ChamberResult) -> String {
    match result {
        ChamberResult::Chamber(c) => format!("chamber {}", format_signs(&c.signs)),
        ChamberResult::OnWall { walls } => format!("on walls {walls:?}"),
    }
}
