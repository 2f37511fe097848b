//! Independent oracles and instance generators shared by the integration
//! tests and the acceptance harness.
#![allow(dead_code)]

use hyperloc::exactnum::{int, ParamScalar, Rational};
use hyperloc::lattice::rational::{dot, kernel, solve, transpose};
use hyperloc::lattice::{is_unimodular, ActionMatrix, IntMatrix};
use hyperloc::sign::Sign;
use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Linear data for the zero-support part of an attachment problem:
/// `r ∈ span(A_Z)` iff `left·r = 0`; coordinate `k` of every solution of
/// `A_Z α = r` equals `fixed[k]·r` when it is constant.
pub struct ZeroPart {
    left: Vec<Vec<Rational>>,
    fixed: Vec<Vec<Rational>>,
}

impl ZeroPart {
    pub fn new(a: &IntMatrix, z: &[usize]) -> Self {
        let d = a.rows();
        let az: Vec<Vec<Rational>> = (0..d)
            .map(|r| z.iter().map(|&j| Rational::from_integer(a.entries()[r][j].clone())).collect())
            .collect();
        let azt = transpose(&az, z.len());
        // Left kernel: y with yᵀ A_Z = 0, i.e. A_Zᵀ y = 0.
        let left = if z.is_empty() {
            (0..d).map(|i| (0..d).map(|k| if i == k { int(1) } else { int(0) }).collect()).collect()
        } else {
            kernel(&azt, d)
        };
        // α_k is constant on the solution set iff e_k lies in the row space,
        // e_k = fᵀ A_Z; then α_k = fᵀ r.
        let fixed = (0..z.len())
            .filter_map(|k| {
                let e: Vec<Rational> = (0..z.len()).map(|i| if i == k { int(1) } else { int(0) }).collect();
                solve(&azt, d, &e).map(|s| s.particular)
            })
            .collect();
        ZeroPart { left, fixed }
    }

    /// Whether `A_Z α = r` has a solution with no integer coordinate.
    pub fn admits_non_integral(&self, r_rat: &[Rational], r_tau: &[Rational]) -> bool {
        if self.left.iter().any(|l| !dot(l, r_rat).is_zero() || !dot(l, r_tau).is_zero()) {
            return false;
        }
        self.fixed
            .iter()
            .all(|f| !(dot(f, r_tau).is_zero() && dot(f, r_rat).is_integer()))
    }
}

/// `f·r` for `r = χ − Σ γ_j a_j`, kept as `(p − q·Σ γ_j g_j) / (q·s)` with
/// integers only: `f = F/s`, `F·χ = p/q`, `g_j = F·a_j`.
struct IntFunctional {
    p: i128,
    q: i128,
    s: i128,
    g: Vec<i128>,
}

impl IntFunctional {
    fn new(f: &[Rational], chi: &[Rational], cols: &[Vec<Rational>]) -> Self {
        let s = f.iter().fold(num_bigint::BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let big: Vec<Rational> = f.iter().map(|x| x * Rational::from_integer(s.clone())).collect();
        let fc = dot(&big, chi);
        let small = |b: &num_bigint::BigInt| i128::try_from(b).expect("oracle values fit in i128");
        IntFunctional {
            p: small(fc.numer()),
            q: small(fc.denom()),
            s: small(&s),
            g: cols.iter().map(|c| small(&dot(&big, c).to_integer())).collect(),
        }
    }

    /// Numerator `p − q·Σ γ_j g_j` of `f·r` over the denominator `q·s`.
    fn numerator(&self, gamma: &[i64]) -> i128 {
        let sum: i128 = gamma.iter().zip(&self.g).map(|(&x, g)| i128::from(x) * g).sum();
        self.p - self.q * sum
    }
}

/// Exhaustive attachment check with integer parts bounded by `bound`.
pub fn attached_by_search(a: &IntMatrix, signs: &[Sign], chi: &[ParamScalar], bound: i64) -> bool {
    let support: Vec<usize> = (0..a.cols()).filter(|&i| signs[i] != Sign::Zero).collect();
    let z: Vec<usize> = (0..a.cols()).filter(|&i| signs[i] == Sign::Zero).collect();
    let zp = ZeroPart::new(a, &z);
    let chi_rat: Vec<Rational> = chi.iter().map(|c| c.rat.clone()).collect();
    let chi_tau: Vec<Rational> = chi.iter().map(|c| c.tau.clone()).collect();
    if support.is_empty() {
        return zp.admits_non_integral(&chi_rat, &chi_tau);
    }
    // The τ-part does not move with γ.
    if zp.left.iter().any(|l| !dot(l, &chi_tau).is_zero()) {
        return false;
    }
    let cols: Vec<Vec<Rational>> = support.iter().map(|&j| a.column_q(j)).collect();
    let left: Vec<IntFunctional> = zp.left.iter().map(|f| IntFunctional::new(f, &chi_rat, &cols)).collect();
    // Only coordinates with no τ-part can be forced onto an integer.
    let fixed: Vec<IntFunctional> = zp
        .fixed
        .iter()
        .filter(|f| dot(f, &chi_tau).is_zero())
        .map(|f| IntFunctional::new(f, &chi_rat, &cols))
        .collect();
    let ranges: Vec<Vec<i64>> = support
        .iter()
        .map(|&i| match signs[i] {
            Sign::Plus => (0..=bound).collect(),
            _ => (-bound..=-1).collect(),
        })
        .collect();
    ranges.into_iter().multi_cartesian_product().any(|gamma| {
        left.iter().all(|f| f.numerator(&gamma) == 0)
            && fixed.iter().all(|f| f.numerator(&gamma) % (f.q * f.s) != 0)
    })
}

/// Instability by search: some `λ ∈ [−bound, bound]^d` with `⟨λ, δ⟩ < 0`
/// and `⟨λ, w⟩ ≥ 0` on every weight of a nonzero coordinate.
pub fn unstable_by_search(a: &IntMatrix, x_support: &[bool], y_support: &[bool], delta: &[Rational], bound: i64) -> bool {
    let d = a.rows();
    let mut weights: Vec<Vec<Rational>> = Vec::new();
    for j in 0..a.cols() {
        let col = a.column_q(j);
        if x_support[j] {
            weights.push(col.clone());
        }
        if y_support[j] {
            weights.push(col.iter().map(|v| -v).collect());
        }
    }
    (0..d)
        .map(|_| -bound..=bound)
        .multi_cartesian_product()
        .any(|lambda| {
            let l: Vec<Rational> = lambda.iter().map(|&v| int(v)).collect();
            dot(&l, delta).is_negative() && weights.iter().all(|w| !dot(&l, w).is_negative())
        })
}

/// A random accepted, unimodular `d × n` matrix with entries in `[−1, 1]`.
pub fn random_unimodular(rng: &mut ChaCha8Rng, d: usize, n: usize) -> IntMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..d).map(|_| (0..n).map(|_| rng.gen_range(-1..=1)).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let m = IntMatrix::from_i64(&refs);
        if ActionMatrix::new(m.clone()).is_ok() && is_unimodular(&m) {
            return m;
        }
    }
}

/// A parameter from a small menu of integral, half-integral, third and
/// τ-shifted values.
pub fn random_param(rng: &mut ChaCha8Rng) -> ParamScalar {
    let base = int(rng.gen_range(-6..=6));
    match rng.gen_range(0..5) {
        0 | 1 => ParamScalar::from(base),
        2 => ParamScalar::from(base + Rational::new(1.into(), 2.into())),
        3 => ParamScalar::from(base + Rational::new(1.into(), 3.into())),
        _ => ParamScalar::new(base, int(1)),
    }
}
