//! The integral cone `C(χ)` of shifts `θ` with `χ + θ → χ`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::qset::{arrow_from_sets, integral_difference, ArrowDetails, ParamSpace, QSet};
use crate::error::{Error, Result};
use crate::exactnum::{bigint_vec, denominator_lcm, rational_str, ParamScalar, Rational};
use crate::git_fan::{wall_hyperplanes, Chamber, FanSource};
use crate::lattice::rational::dot;
use crate::lattice::IntMatrix;
use crate::sign::Sign;

/// Multiples `q` used to post-validate each generator.
pub const VALIDATION_MULTIPLES: [u32; 3] = [1, 2, 3];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorCheck {
    #[serde(with = "bigint_vec")]
    pub generator: Vec<BigInt>,
    pub multiple: u32,
    /// `χ + q·u → χ`, i.e. `Q_χ ⊆ Q_{χ+q·u}`.
    pub shifted_to_base: bool,
    /// `χ → χ + q·u`, i.e. `Q_{χ+q·u} ⊆ Q_χ`.
    pub base_to_shifted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftCone {
    pub generators: Vec<Vec<String>>,
    #[serde(skip)]
    pub generators_int: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "big_str")]
    pub n0: BigInt,
    #[serde(serialize_with = "big_str")]
    pub n1: BigInt,
    #[serde(with = "bigint_vec")]
    pub delta: Vec<BigInt>,
    #[serde(with = "rational_str")]
    pub box_constant: Rational,
    /// Clears the box vertices: `p·v_j ∈ ℤⁿ`.
    #[serde(serialize_with = "big_str")]
    pub p: BigInt,
    /// Inward normals of the chamber walls.
    pub mu: Vec<Vec<String>>,
    pub rank: usize,
    pub checks: Vec<GeneratorCheck>,
    pub q_set: QSet,
}

fn big_str<S: serde::Serializer>(b: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&b.to_string())
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn q(b: &BigInt) -> Rational {
    Rational::from_integer(b.clone())
}

fn pair(mu: &[BigInt], v: &[Rational]) -> Rational {
    dot(&mu.iter().map(q).collect::<Vec<_>>(), v)
}

pub fn shifting_cone(a: &IntMatrix, chi: &[ParamScalar], chamber: &Chamber) -> Result<ShiftCone> {
    shifting_cone_in(&ParamSpace::new(a), chi, chamber)
}

pub fn shifting_cone_in(space: &ParamSpace, chi: &[ParamScalar], chamber: &Chamber) -> Result<ShiftCone> {
    if !space.unimodular {
        return Err(Error::NotUnimodular);
    }
    let a = &space.a;
    let (d, n) = (a.rows(), a.cols());
    if chi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: chi.len() });
    }
    if chamber.witness.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: chamber.witness.len() });
    }

    // μ_i, oriented to be positive on the chamber.
    let walls = wall_hyperplanes(a, FanSource::FanOnMomentFiber);
    let mut mu: Vec<Vec<BigInt>> = Vec::new();
    for w in &walls.walls {
        match Sign::of(&pair(&w.normal, &chamber.witness)) {
            Sign::Plus => mu.push(w.normal.clone()),
            Sign::Minus => mu.push(w.normal.iter().map(|x| -x).collect()),
            Sign::Zero => return Err(Error::NotInChamber),
        }
    }
    let pr: Vec<Rational> = chi.iter().map(ParamScalar::pr).collect();
    let g0: Vec<Rational> = mu.iter().map(|m| pair(m, &pr)).collect();
    if g0.iter().any(|g| !g.is_positive()) {
        return Err(Error::NotInChamber);
    }

    let q_set = space.q_set(chi)?;
    if q_set.partial {
        return Err(Error::PartialQSet { radius: space.radius });
    }

    // Claim 1: N₀ clears every pr(β^λ). The denominators of pr(χ) divide this
    // already, but are included so N₀·pr(χ) ∈ X even when Q_χ is trivial.
    let witness_prs: Vec<Rational> = q_set
        .witnesses
        .values()
        .flat_map(|beta| beta.iter().map(ParamScalar::pr))
        .collect();
    let n0 = denominator_lcm(witness_prs.iter().chain(&pr));

    // Claim 2: N₁ = p·N₀ with (N₁/d)·⟨μ_i, prχ⟩ > |⟨μ_i, a_j⟩|, then enlarged
    // until the shifted witnesses have |β_i| > 1 on their integer support.
    let pairings: Vec<Vec<Rational>> = mu
        .iter()
        .map(|m| (0..n).map(|j| pair(m, &a.column_q(j)).abs()).collect())
        .collect();
    let dq = Rational::from_integer(BigInt::from(d));
    let mut p1 = BigInt::one();
    let n1 = loop {
        let n1 = &p1 * &n0;
        let scale = q(&n1) / &dq;
        let big_enough = g0
            .iter()
            .zip(&pairings)
            .all(|(g, row)| row.iter().all(|x| &scale * g > *x));
        if big_enough && shifted_witnesses_ok(&q_set, &n1) {
            break n1;
        }
        p1 += 1;
    };

    let delta: Vec<BigInt> = (0..d)
        .map(|r| (0..n).map(|j| a.entries()[r][j].clone()).sum())
        .collect();

    // Box: [−c, c]ⁿ ⊂ I_χ = {ε : −⟨μ_i, N₁prχ + δ⟩ < ⟨μ_i, Aε⟩}. The worst ε
    // in the box gives −c·Σ_j|⟨μ_i, a_j⟩|, so c = 1/q for the least q ≥ 2
    // with Σ_j|⟨μ_i, a_j⟩| < q·⟨μ_i, N₁prχ + δ⟩.
    let base: Vec<Rational> = pr
        .iter()
        .zip(&delta)
        .map(|(x, dl)| q(&n1) * x + q(dl))
        .collect();
    let gaps: Vec<Rational> = mu.iter().map(|m| pair(m, &base)).collect();
    let sums: Vec<Rational> = pairings.iter().map(|row| row.iter().sum()).collect();
    let mut qbox = BigInt::from(2);
    while !gaps.iter().zip(&sums).all(|(g, s)| s < &(q(&qbox) * g)) {
        qbox += 1;
    }
    let box_constant = Rational::new(BigInt::one(), qbox.clone());
    let p = qbox.clone();

    // u_j = p(N₁prχ + δ + A·v_j) with v_j ∈ {±c}ⁿ, so p·v_j ∈ {±1}ⁿ.
    let scaled: Vec<BigInt> = base
        .iter()
        .map(|x| {
            let v = q(&p) * x;
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect();
    let mut generators: Vec<Vec<BigInt>> = Vec::new();
    for mask in 0..(1u64 << n) {
        let u: Vec<BigInt> = (0..d)
            .map(|r| {
                let corr: BigInt = (0..n)
                    .map(|j| {
                        let e = &a.entries()[r][j];
                        if mask >> j & 1 == 1 {
                            e.clone()
                        } else {
                            -e
                        }
                    })
                    .sum();
                &scaled[r] + corr
            })
            .collect();
        let uq: Vec<Rational> = u.iter().map(q).collect();
        if mu.iter().any(|m| !pair(m, &uq).is_positive()) {
            return Err(Error::InternalInconsistency(format!(
                "generator {u:?} left the chamber"
            )));
        }
        generators.push(u);
    }
    generators.sort();
    generators.dedup();

    let checks = validate(space, chi, &q_set, &generators)?;
    let rank = IntMatrix::from_rows(generators.clone())?.rank();
    Ok(ShiftCone {
        generators: generators.iter().map(|g| strings(g)).collect(),
        generators_int: generators,
        n0,
        n1,
        delta,
        box_constant,
        p,
        mu: mu.iter().map(|m| strings(m)).collect(),
        rank,
        checks,
        q_set,
    })
}

/// The witnesses for `χ + N₁·prχ` are `β + N₁·pr(β)`; integer entries must
/// have absolute value above one so that adding one keeps their sign.
fn shifted_witnesses_ok(q_set: &QSet, n1: &BigInt) -> bool {
    let n1 = q(n1);
    q_set.witnesses.values().all(|beta| {
        beta.iter().all(|b| {
            let shifted = b.clone() + ParamScalar::from(&n1 * b.pr());
            !shifted.is_integer() || shifted.rat.is_zero() || shifted.rat.abs() > Rational::one()
        })
    })
}

fn validate(space: &ParamSpace, chi: &[ParamScalar], base: &QSet, generators: &[Vec<BigInt>]) -> Result<Vec<GeneratorCheck>> {
    let base_signs = base.signs();
    let mut out = Vec::new();
    for u in generators {
        for &m in &VALIDATION_MULTIPLES {
            let shifted: Vec<ParamScalar> = chi
                .iter()
                .zip(u)
                .map(|(c, x)| c.clone() + ParamScalar::from(q(&(x * BigInt::from(m)))))
                .collect();
            let qs = space.q_set(&shifted)?;
            if qs.partial {
                return Err(Error::PartialQSet { radius: space.radius });
            }
            let integral = integral_difference(chi, &shifted);
            let forward: ArrowDetails = arrow_from_sets(integral, &qs.signs(), &base_signs);
            let backward: ArrowDetails = arrow_from_sets(integral, &base_signs, &qs.signs());
            if !forward.holds {
                return Err(Error::ValidationFailed {
                    generator: strings(u).join(","),
                    multiple: m,
                });
            }
            out.push(GeneratorCheck {
                generator: u.clone(),
                multiple: m,
                shifted_to_base: forward.holds,
                base_to_shifted: backward.holds,
            });
        }
    }
    Ok(out)
}
