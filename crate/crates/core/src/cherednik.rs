//! The rational Cherednik algebra of `ℤ_m` through its combinatorics: the
//! cyclic quiver matrix, the parameter map `h ↦ χ`, the hyperplanes `𝒞`,
//! lowest-weight modules and the Dunkl eigenvalues.
//!
//! Indices of `h` are taken mod `m`; in particular `h_m = h_0`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, int, rational_vec_str, ParamScalar, Rational};
use crate::git_fan::{chamber_of, wall_hyperplanes, ChamberResult, FanSource};
use crate::lattice::rational::{primitive_integer, sign_normalize, solve};
use crate::lattice::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CherednikParams {
    pub m: usize,
    #[serde(with = "rational_vec_str")]
    pub h: Vec<Rational>,
}

impl CherednikParams {
    pub fn new(m: usize, h: Vec<Rational>) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadM(m as i64));
        }
        if h.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: h.len() });
        }
        Ok(CherednikParams { m, h })
    }

    /// `h_k` with `k` read mod `m`.
    pub fn h_at(&self, k: usize) -> &Rational {
        &self.h[k % self.m]
    }

    fn mq(&self) -> Rational {
        int(self.m as i64)
    }
}

/// `[I_{m−1} | −1]`.
pub fn cyclic_quiver_matrix(m: i64) -> Result<IntMatrix> {
    if m < 2 {
        return Err(Error::BadM(m));
    }
    let m = m as usize;
    let rows = (0..m - 1)
        .map(|i| {
            (0..m)
                .map(|j| match j {
                    _ if j == m - 1 => BigInt::from(-1),
                    _ if j == i => BigInt::one(),
                    _ => BigInt::zero(),
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(rows)
}

/// `χ_i = h_i − h_m + (i − m)/m` for `i ∈ [1, m−1]`.
pub fn chi_of_h(p: &CherednikParams) -> Vec<ParamScalar> {
    let m = p.mq();
    (1..p.m)
        .map(|i| ParamScalar::from(p.h_at(i) - p.h_at(p.m) + (int(i as i64) - &m) / &m))
        .collect()
}

/// One equation `j + m h_{i+j} − m h_i = 0` of `𝒞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrangementEquation {
    pub i: usize,
    pub j: usize,
    /// Value at the given `h`.
    #[serde(with = "crate::exactnum::rational_str")]
    pub value: Rational,
}

impl ArrangementEquation {
    /// The affine functional on `h ∈ ℚ^m` as `(coefficients, constant)`.
    pub fn functional(&self, m: usize) -> (Vec<Rational>, Rational) {
        let mut c = vec![Rational::zero(); m];
        c[(self.i + self.j) % m] += int(m as i64);
        c[self.i % m] -= int(m as i64);
        (c, int(self.j as i64))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrangementMembership {
    pub member: bool,
    pub satisfied: Vec<ArrangementEquation>,
    /// `j = 0`: the equation reads `0 = 0` for every `h`.
    pub skipped_degenerate: Vec<(usize, usize)>,
}

/// Equations with `i ∈ [1, m−1]`, `j ∈ [1, m−i]` (the `j = 0` ones are
/// identically zero and reported separately).
pub fn arrangement_equations(p: &CherednikParams) -> (Vec<ArrangementEquation>, Vec<(usize, usize)>) {
    let m = p.mq();
    let mut eqs = Vec::new();
    let mut skipped = Vec::new();
    for i in 1..p.m {
        for j in 0..=(p.m - i) {
            if j == 0 {
                skipped.push((i, j));
                continue;
            }
            let value = int(j as i64) + &m * p.h_at(i + j) - &m * p.h_at(i);
            eqs.push(ArrangementEquation { i, j, value });
        }
    }
    (eqs, skipped)
}

pub fn in_arrangement_c(p: &CherednikParams) -> ArrangementMembership {
    let (eqs, skipped_degenerate) = arrangement_equations(p);
    let satisfied: Vec<ArrangementEquation> = eqs.into_iter().filter(|e| e.value.is_zero()).collect();
    ArrangementMembership {
        member: !satisfied.is_empty(),
        satisfied,
        skipped_degenerate,
    }
}

/// `c ∈ ℤ≥1 ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SimpleDim {
    Finite(BigInt),
    Infinite,
}

impl Serialize for SimpleDim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SimpleDim::Finite(c) => s.serialize_str(&c.to_string()),
            SimpleDim::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `c_i`: least `c ≥ 1` with `c + m h_{i+c} − m h_i = 0`. Since `h_{i+c}`
/// only depends on `c mod m`, each residue `j` has the single candidate
/// `c = m(h_i − h_{i+j})`, valid iff it is a positive integer `≡ j`.
pub fn simple_dim(p: &CherednikParams, i: usize) -> SimpleDim {
    let m = p.mq();
    let modulus = BigInt::from(p.m);
    (0..p.m)
        .filter_map(|j| {
            let c = &m * (p.h_at(i) - p.h_at(i + j));
            if !c.is_integer() {
                return None;
            }
            let c = c.to_integer();
            (c.is_positive() && c.mod_floor(&modulus) == BigInt::from(j)).then_some(c)
        })
        .min()
        .map_or(SimpleDim::Infinite, SimpleDim::Finite)
}

/// The action of `y` on `x^r e_i ∈ Δ(e_i)`: `y·x^r e_i = y_coeffs[r−1]·x^{r−1} e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaModule {
    pub i: usize,
    pub truncation: usize,
    #[serde(with = "rational_vec_str")]
    pub y_coeffs: Vec<Rational>,
    /// Least `r ≤ T` with a vanishing coefficient; `None` if there is none.
    #[serde(serialize_with = "opt_usize")]
    pub brute_force_c: Option<usize>,
}

fn opt_usize<S: Serializer>(v: &Option<usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(c) => s.serialize_str(&c.to_string()),
        None => s.serialize_str("inf-within-truncation"),
    }
}

impl DeltaModule {
    /// Coefficient for `x^r`, `r ≥ 1`.
    pub fn coeff(&self, r: usize) -> &Rational {
        &self.y_coeffs[r - 1]
    }

    pub fn agrees_with(&self, exact: &SimpleDim) -> bool {
        match (self.brute_force_c, exact) {
            (Some(c), SimpleDim::Finite(e)) => BigInt::from(c) == *e,
            (None, SimpleDim::Finite(e)) => *e > BigInt::from(self.truncation),
            (None, SimpleDim::Infinite) => true,
            (Some(_), SimpleDim::Infinite) => false,
        }
    }
}

pub fn delta_action(p: &CherednikParams, i: usize, truncation: usize) -> DeltaModule {
    let m = p.mq();
    let y_coeffs: Vec<Rational> = (1..=truncation)
        .map(|r| int(r as i64) + &m * (p.h_at(i + r) - p.h_at(i)))
        .collect();
    let brute_force_c = y_coeffs.iter().position(Zero::is_zero).map(|k| k + 1);
    DeltaModule {
        i: i % p.m,
        truncation,
        y_coeffs,
        brute_force_c,
    }
}

/// `Θ_h(y^m e)(x^r) = Π_{i=1}^m (r − m + i + m h_i) · x^{r−m}`.
pub fn dunkl_ym_eigenvalue(p: &CherednikParams, r: i64) -> Rational {
    let m = p.mq();
    (1..=p.m)
        .map(|i| int(r) - &m + int(i as i64) + &m * p.h_at(i))
        .product()
}

/// The same eigenvalue computed through `δ_h = Π x_i^{h_i + (i−m)/m}`:
/// `∂_1⋯∂_m` applied to `δ_h · Π x_i^{r/m}` multiplies by the product of
/// the exponents, so `m^m Π (r/m + h_i + (i−m)/m)`.
pub fn radial_parts_eigenvalue(p: &CherednikParams, r: i64) -> Rational {
    let m = p.mq();
    let scale: Rational = (0..p.m).map(|_| m.clone()).product();
    let exps: Rational = (1..=p.m)
        .map(|i| int(r) / &m + p.h_at(i) + (int(i as i64) - &m) / &m)
        .product();
    scale * exps
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadialPartsCheck {
    pub holds: bool,
    pub failing_r: Option<i64>,
}

pub fn radial_parts_identity_check(p: &CherednikParams, r_range: impl IntoIterator<Item = i64>) -> RadialPartsCheck {
    let failing_r = r_range
        .into_iter()
        .find(|&r| radial_parts_eigenvalue(p, r) != dunkl_ym_eigenvalue(p, r));
    RadialPartsCheck {
        holds: failing_r.is_none(),
        failing_r,
    }
}

/// Image of an arrangement equation under `h ↦ χ`: a linear functional
/// `n·χ + n₀`. Returns the primitive normal and whether `n₀ = 0`.
pub fn image_of_equation(p: &CherednikParams, eq: &ArrangementEquation) -> Result<(Vec<BigInt>, bool)> {
    let (c, c0) = eq.functional(p.m);
    let m = p.m;
    // χ = M·h + b with M_{k,k} = 1, M_{k,0} = −1 (h_m = h_0).
    let mt: Vec<Vec<Rational>> = (0..m)
        .map(|col| {
            (1..m)
                .map(|k| {
                    if col == k {
                        Rational::one()
                    } else if col == 0 {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let sol = solve(&mt, m - 1, &c).ok_or_else(|| {
        Error::InternalInconsistency(format!("equation (i={}, j={}) is not a pullback from χ", eq.i, eq.j))
    })?;
    let n = sol.particular;
    let b: Vec<Rational> = (1..m)
        .map(|k| (int(k as i64) - int(m as i64)) / int(m as i64))
        .collect();
    let nb: Rational = n.iter().zip(&b).map(|(x, y)| x * y).sum();
    let n0 = c0 - nb;
    let mut prim = primitive_integer(&n);
    sign_normalize(&mut prim);
    Ok((prim, n0.is_zero()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallCorrespondence {
    pub holds: bool,
    pub arrangement_images: Vec<Vec<String>>,
    pub walls: Vec<Vec<String>>,
    /// Images that are affine (not through the origin).
    pub affine_images: Vec<(usize, usize)>,
}

/// The images of the hyperplanes of `𝒞` are exactly the GIT walls.
pub fn wall_correspondence(m: usize) -> Result<WallCorrespondence> {
    let p = CherednikParams::new(m, vec![Rational::zero(); m])?;
    let (eqs, _) = arrangement_equations(&p);
    let mut images = BTreeSet::new();
    let mut affine_images = Vec::new();
    for eq in &eqs {
        let (n, linear) = image_of_equation(&p, eq)?;
        if !linear {
            affine_images.push((eq.i, eq.j));
        }
        images.insert(n);
    }
    let walls: BTreeSet<Vec<BigInt>> = wall_hyperplanes(&cyclic_quiver_matrix(m as i64)?, FanSource::FanOnMomentFiber)
        .normals()
        .into_iter()
        .collect();
    let show = |s: &BTreeSet<Vec<BigInt>>| -> Vec<Vec<String>> {
        s.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect()
    };
    Ok(WallCorrespondence {
        holds: affine_images.is_empty() && images == walls,
        arrangement_images: show(&images),
        walls: show(&walls),
        affine_images,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationVerdict {
    pub params: CherednikParams,
    pub chi: Vec<ParamScalar>,
    pub arrangement: ArrangementMembership,
    pub on_wall: bool,
    pub walls_containing_chi: Vec<usize>,
    pub simple_dims: Vec<SimpleDim>,
    pub equivalence_holds: bool,
}

pub fn localization_verdict(p: &CherednikParams) -> Result<LocalizationVerdict> {
    let chi = chi_of_h(p);
    let arrangement = in_arrangement_c(p);
    let walls = wall_hyperplanes(&cyclic_quiver_matrix(p.m as i64)?, FanSource::FanOnMomentFiber);
    let pr: Vec<Rational> = chi.iter().map(ParamScalar::pr).collect();
    let walls_containing_chi = match chamber_of(&pr, &walls) {
        ChamberResult::OnWall { walls } => walls,
        ChamberResult::Chamber(_) => vec![],
    };
    let on_wall = !walls_containing_chi.is_empty();
    if on_wall != arrangement.member {
        return Err(Error::InternalInconsistency(format!(
            "h = ({}) is {}in the arrangement but χ is {}on a wall",
            p.h.iter().map(format_rational).collect::<Vec<_>>().join(","),
            if arrangement.member { "" } else { "not " },
            if on_wall { "" } else { "not " }
        )));
    }
    Ok(LocalizationVerdict {
        params: p.clone(),
        chi,
        equivalence_holds: !arrangement.member,
        arrangement,
        on_wall,
        walls_containing_chi,
        simple_dims: (0..p.m).map(|i| simple_dim(p, i)).collect(),
    })
}
