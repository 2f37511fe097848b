//! Polynomial symbols in `x_i, ξ_i` with half-integer powers of ħ, and the
//! star product
//!
//! ```text
//! a ∘ b = Σ_α ħ^{|α|} / α! · ∂ξ^α a · ∂x^α b.
//! ```
//!
//! Sign conventions: `{ξ_i, x_j} = δ_ij` and `[x_i, ξ_i] = −ħ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::lattice::rational::rref;
use crate::lattice::{determinant, kernel_basis, IntMatrix};

/// `(2·ħ-exponent, x-exponents, ξ-exponents)`; exponent vectors carry no
/// trailing zeros so that equality does not depend on the variable count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub h2: i64,
    pub x: Vec<u32>,
    pub xi: Vec<u32>,
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn at(v: &[u32], i: usize) -> u32 {
    v.get(i).copied().unwrap_or(0)
}

impl Monomial {
    pub fn new(h2: i64, x: Vec<u32>, xi: Vec<u32>) -> Self {
        Monomial { h2, x: trim(x), xi: trim(xi) }
    }

    pub fn one() -> Self {
        Monomial::new(0, vec![], vec![])
    }

    fn nvars(&self) -> usize {
        self.x.len().max(self.xi.len())
    }

    /// Total `x`/`ξ` degree.
    pub fn degree(&self) -> u32 {
        self.x.iter().chain(&self.xi).sum()
    }

    fn product(&self, other: &Monomial) -> Monomial {
        let n = self.nvars().max(other.nvars());
        Monomial::new(
            self.h2 + other.h2,
            (0..n).map(|i| at(&self.x, i) + at(&other.x, i)).collect(),
            (0..n).map(|i| at(&self.xi, i) + at(&other.xi, i)).collect(),
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeylElement {
    terms: BTreeMap<Monomial, Rational>,
}

/// Falling factorial `k (k−1) … (k−j+1)`.
fn falling(k: u32, j: u32) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, t| acc * BigInt::from(k - t))
}

fn factorial(j: u32) -> BigInt {
    falling(j, j)
}

impl WeylElement {
    pub fn zero() -> Self {
        WeylElement::default()
    }

    pub fn one() -> Self {
        WeylElement::monomial(Rational::one(), Monomial::one())
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut e = WeylElement::zero();
        e.add_term(m, c);
        e
    }

    /// `ħ^{h2/2}`.
    pub fn hbar_pow(h2: i64) -> Self {
        WeylElement::monomial(Rational::one(), Monomial::new(h2, vec![], vec![]))
    }

    pub fn hbar() -> Self {
        WeylElement::hbar_pow(2)
    }

    /// `x_i` (0-based).
    pub fn x(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        WeylElement::monomial(Rational::one(), Monomial::new(0, e, vec![]))
    }

    /// `ξ_i` (0-based).
    pub fn xi(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        WeylElement::monomial(Rational::one(), Monomial::new(0, vec![], e))
    }

    pub fn constant(c: Rational) -> Self {
        WeylElement::monomial(c, Monomial::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = WeylElement::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Commutative product of symbols (no ħ corrections).
    pub fn commutative_mul(&self, other: &Self) -> Self {
        let mut out = WeylElement::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.product(m2), c1 * c2);
            }
        }
        out
    }

    /// Least half-integer `m` with `a ∈ W(m)`, returned doubled; `None` for 0.
    pub fn order2(&self) -> Option<i64> {
        self.terms.keys().map(|m| -m.h2).max()
    }

    pub fn order(&self) -> Option<Rational> {
        self.order2().map(|o| Rational::new(BigInt::from(o), BigInt::from(2)))
    }

    pub fn is_symbol(&self) -> bool {
        self.terms.keys().all(|m| m.h2 == 0)
    }

    /// T-weight of a monomial: `x_j ↦ a_j`, `ξ_j ↦ −a_j`.
    pub fn torus_weight(m: &Monomial, a: &IntMatrix) -> Vec<BigInt> {
        (0..a.rows())
            .map(|r| {
                (0..a.cols())
                    .map(|j| &a.entries()[r][j] * (i64::from(at(&m.x, j)) - i64::from(at(&m.xi, j))))
                    .sum()
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    json!({
                        "h": format_rational(&Rational::new(BigInt::from(m.h2), BigInt::from(2))),
                        "x": m.x,
                        "xi": m.xi,
                        "c": format_rational(c),
                    })
                })
                .collect(),
        )
    }

    /// Parse a list of `{"h", "x", "xi", "c"}` terms; `h` and `c` may be
    /// strings or integers and default to `0` and `1`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse {
            what: "weyl element",
            input: v.to_string(),
        };
        let terms = v.as_array().ok_or_else(bad)?;
        let mut out = WeylElement::zero();
        for t in terms {
            let obj = t.as_object().ok_or_else(bad)?;
            let num = |key: &str, default: &str| -> Result<Rational> {
                match obj.get(key) {
                    None => parse_rational(default),
                    Some(Value::String(s)) => parse_rational(s),
                    Some(Value::Number(n)) => parse_rational(&n.to_string()),
                    Some(_) => Err(bad()),
                }
            };
            let exps = |key: &str| -> Result<Vec<u32>> {
                match obj.get(key) {
                    None => Ok(vec![]),
                    Some(Value::Array(a)) => a
                        .iter()
                        .map(|e| e.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(bad))
                        .collect(),
                    Some(_) => Err(bad()),
                }
            };
            let h2 = num("h", "0")? * Rational::from_integer(BigInt::from(2));
            if !h2.is_integer() {
                return Err(bad());
            }
            let h2 = i64::try_from(h2.to_integer()).map_err(|_| bad())?;
            out.add_term(Monomial::new(h2, exps("x")?, exps("xi")?), num("c", "1")?);
        }
        Ok(out)
    }
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                if !c.is_one() || m == &Monomial::one() {
                    factors.push(format_rational(c));
                }
                match m.h2 {
                    0 => {}
                    2 => factors.push("h".into()),
                    h if h % 2 == 0 => factors.push(format!("h^{}", h / 2)),
                    h => factors.push(format!("h^({h}/2)")),
                }
                for (name, exps) in [("x", &m.x), ("xi", &m.xi)] {
                    for (i, &e) in exps.iter().enumerate() {
                        match e {
                            0 => {}
                            1 => factors.push(format!("{name}{}", i + 1)),
                            e => factors.push(format!("{name}{}^{e}", i + 1)),
                        }
                    }
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Contribution of one pair of terms to `a ∘ b`.
fn star_terms(m1: &Monomial, c1: &Rational, m2: &Monomial, c2: &Rational, out: &mut Vec<(Monomial, Rational)>) {
    let n = m1.nvars().max(m2.nvars());
    // α ranges over 0 ≤ α ≤ min(ξ-exponents of a, x-exponents of b).
    let bounds: Vec<u32> = (0..n).map(|i| at(&m1.xi, i).min(at(&m2.x, i))).collect();
    let mut alpha = vec![0u32; n];
    loop {
        let mut coeff = Rational::from_integer(BigInt::one());
        let mut abs = 0i64;
        for i in 0..n {
            let k = alpha[i];
            if k > 0 {
                coeff *= Rational::new(falling(at(&m1.xi, i), k) * falling(at(&m2.x, i), k), factorial(k));
                abs += i64::from(k);
            }
        }
        let x: Vec<u32> = (0..n).map(|i| at(&m1.x, i) + at(&m2.x, i) - alpha[i]).collect();
        let xi: Vec<u32> = (0..n).map(|i| at(&m1.xi, i) - alpha[i] + at(&m2.xi, i)).collect();
        out.push((Monomial::new(m1.h2 + m2.h2 + 2 * abs, x, xi), coeff * c1 * c2));

        // Odometer over the box of α.
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if alpha[i] < bounds[i] {
                alpha[i] += 1;
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}

pub fn star(a: &WeylElement, b: &WeylElement) -> WeylElement {
    let partial: Vec<Vec<(Monomial, Rational)>> = a
        .terms
        .par_iter()
        .map(|(m1, c1)| {
            let mut out = Vec::new();
            for (m2, c2) in &b.terms {
                star_terms(m1, c1, m2, c2, &mut out);
            }
            out
        })
        .collect();
    let mut result = WeylElement::zero();
    for (m, c) in partial.into_iter().flatten() {
        result.add_term(m, c);
    }
    result
}

/// `a ∘ b − b ∘ a`.
pub fn bracket(a: &WeylElement, b: &WeylElement) -> WeylElement {
    star(a, b).sub(&star(b, a))
}

fn derivative(a: &WeylElement, var: usize, in_xi: bool) -> WeylElement {
    let mut out = WeylElement::zero();
    for (m, c) in &a.terms {
        let (mut x, mut xi) = (m.x.clone(), m.xi.clone());
        let exps = if in_xi { &mut xi } else { &mut x };
        let e = at(exps, var);
        if e == 0 {
            continue;
        }
        exps[var] -= 1;
        out.add_term(Monomial::new(m.h2, x, xi), c * Rational::from_integer(BigInt::from(e)));
    }
    out
}

/// `{f, g} = Σ_i ∂f/∂ξ_i ∂g/∂x_i − ∂f/∂x_i ∂g/∂ξ_i`.
pub fn poisson(f: &WeylElement, g: &WeylElement) -> Result<WeylElement> {
    if !f.is_symbol() || !g.is_symbol() {
        return Err(Error::NonSymbol);
    }
    let n = f.terms.keys().chain(g.terms.keys()).map(Monomial::nvars).max().unwrap_or(0);
    let mut out = WeylElement::zero();
    for i in 0..n {
        out = out
            .add(&derivative(f, i, true).commutative_mul(&derivative(g, i, false)))
            .sub(&derivative(f, i, false).commutative_mul(&derivative(g, i, true)));
    }
    Ok(out)
}

/// The `ħ^{−m}` part of `a ∈ W(m)`; `m2 = 2m`.
pub fn symbol(a: &WeylElement, m2: i64) -> Result<WeylElement> {
    if a.terms.keys().any(|m| m.h2 < -m2) {
        return Err(Error::NotInFiltration(format!(
            "{a} has order {} > {}",
            format_rational(&a.order().unwrap_or_default()),
            format_rational(&Rational::new(BigInt::from(m2), BigInt::from(2)))
        )));
    }
    let mut out = WeylElement::zero();
    for (m, c) in a.terms.iter().filter(|(m, _)| m.h2 == -m2) {
        out.add_term(m.clone(), c.clone());
    }
    Ok(out)
}

/// `μ_W(t_i) = Σ_j a_ij ħ^{−1} x_j ξ_j` (0-based `i`).
pub fn mu_w(a: &IntMatrix, i: usize) -> WeylElement {
    let mut out = WeylElement::zero();
    for j in 0..a.cols() {
        let mut e = vec![0; j + 1];
        e[j] = 1;
        out.add_term(
            Monomial::new(-2, e.clone(), e),
            Rational::from_integer(a.entries()[i][j].clone()),
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FWeight {
    Homogeneous(i64),
    Mixed,
    /// The zero element has every weight.
    Zero,
}

/// Weight with `wt(x_i) = wt(ξ_i) = 1`, `wt(ħ) = 2`.
pub fn f_weight(a: &WeylElement) -> FWeight {
    let mut weights = a.terms.keys().map(|m| i64::from(m.degree()) + m.h2);
    match weights.next() {
        None => FWeight::Zero,
        Some(w) if weights.all(|v| v == w) => FWeight::Homogeneous(w),
        Some(_) => FWeight::Mixed,
    }
}

/// Normal form of the moment ideal and the flatness data derived from it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentIdeal {
    /// `Σ_j a_ij x_j ξ_j`, one per row.
    pub generators: Vec<WeylElement>,
    /// Pivot columns first, then the rest (0-based).
    pub permutation: Vec<usize>,
    /// Row operations `U` with `U·A_pivot` diagonal.
    pub row_operations: Vec<Vec<String>>,
    pub row_operations_unimodular: bool,
    pub diagonal: Vec<String>,
    /// `c[i][k]`: generator `i` reads `x_p ξ_p − Σ_k c[i][k] x_k ξ_k`, where
    /// `p = permutation[i]` and `k` runs over `permutation[d..]`.
    pub c: Vec<Vec<String>>,
    pub c_integral: bool,
    /// `x_p ξ_p` for the pivot columns.
    pub initial_ideal: Vec<WeylElement>,
    pub dim_moment_fiber: usize,
    pub dim_reduction: usize,
    /// Rows of the kernel basis `B` that vanish identically.
    pub b_zero_rows: Vec<usize>,
    /// Pivot columns whose normal-form row has no `c` entries.
    pub c_zero_rows: Vec<usize>,
    pub affine_certificate: bool,
}

pub fn moment_ideal(a: &IntMatrix) -> Result<MomentIdeal> {
    let (d, n) = (a.rows(), a.cols());
    let rank = a.rank();
    if rank < d {
        return Err(Error::RankDeficient { rank, rows: d });
    }
    let generators: Vec<WeylElement> = (0..d).map(|i| mu_w(a, i).shift_hbar(2)).collect();

    // Prefer a pivot block with determinant ±1 so the row operations are
    // unimodular and the normal form is integral.
    let mut chosen: Option<Vec<usize>> = None;
    for cols in itertools::Itertools::combinations(0..n, d) {
        let det = determinant(&a.select_columns(&cols));
        if det.is_zero() {
            continue;
        }
        let unit = det == BigInt::one() || det == -BigInt::one();
        if chosen.is_none() || unit {
            chosen = Some(cols);
        }
        if unit {
            break;
        }
    }
    let pivots = chosen.ok_or(Error::RankDeficient { rank, rows: d })?;
    let rest: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let permutation: Vec<usize> = pivots.iter().chain(&rest).copied().collect();

    // U = D·B⁻¹ with D the least diagonal scaling that makes U integral.
    let block = a.select_columns(&pivots).to_rational();
    let inverse: Vec<Vec<Rational>> = {
        let mut aug: Vec<Vec<Rational>> = block
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..d).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        rref(&mut aug);
        aug.into_iter().map(|r| r[d..].to_vec()).collect()
    };
    let diag: Vec<BigInt> = inverse
        .iter()
        .map(|row| crate::exactnum::denominator_lcm(row.iter()))
        .collect();
    let u: Vec<Vec<Rational>> = inverse
        .iter()
        .zip(&diag)
        .map(|(row, dd)| row.iter().map(|x| x * Rational::from_integer(dd.clone())).collect())
        .collect();
    let u_int = IntMatrix::from_rows(u.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect())?;
    let det_u = determinant(&u_int);
    let ua = u_int.mul(a);
    let c: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            rest.iter()
                .map(|&j| -Rational::new(ua.entries()[i][j].clone(), diag[i].clone()))
                .collect()
        })
        .collect();

    let initial_ideal = pivots
        .iter()
        .map(|&p| {
            let mut e = vec![0; p + 1];
            e[p] = 1;
            WeylElement::monomial(Rational::one(), Monomial::new(0, e.clone(), e))
        })
        .collect();
    let b_zero_rows = kernel_basis(a)?.zero_rows();
    let c_zero_rows: Vec<usize> = (0..d)
        .filter(|&i| c[i].iter().all(Zero::is_zero))
        .map(|i| pivots[i])
        .collect();
    Ok(MomentIdeal {
        generators,
        permutation,
        row_operations: u_int.entries().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        row_operations_unimodular: det_u == BigInt::one() || det_u == -BigInt::one(),
        diagonal: diag.iter().map(ToString::to_string).collect(),
        c_integral: c.iter().flatten().all(|x| x.is_integer()),
        c: c.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        initial_ideal,
        dim_moment_fiber: 2 * n - d,
        dim_reduction: 2 * (n - d),
        affine_certificate: b_zero_rows.is_empty(),
        b_zero_rows,
        c_zero_rows,
    })
}

impl WeylElement {
    /// Multiply by `ħ^{h2/2}`.
    pub fn shift_hbar(&self, h2: i64) -> Self {
        let mut out = WeylElement::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial { h2: m.h2 + h2, ..m.clone() }, c.clone());
        }
        out
    }
}

/// Evaluate a JSON expression tree. Leaves are term lists (or
/// `{"terms": [...]}`); nodes are `{"op": ..., "args": [...]}` with ops
/// `star`, `bracket`, `poisson`, `add`, `sub`, and `{"op": "symbol", "m":
/// "1/2", "arg": ...}`, `{"op": "scale", "c": "3/4", "arg": ...}`.
pub fn eval(expr: &Value) -> Result<WeylElement> {
    let bad = || Error::Parse {
        what: "weyl expression",
        input: expr.to_string(),
    };
    if expr.is_array() {
        return WeylElement::from_json(expr);
    }
    let obj = expr.as_object().ok_or_else(bad)?;
    if let Some(terms) = obj.get("terms") {
        return WeylElement::from_json(terms);
    }
    let op = obj.get("op").and_then(Value::as_str).ok_or_else(bad)?;
    let args = || -> Result<Vec<WeylElement>> {
        obj.get("args")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(eval)
            .collect()
    };
    let two = || -> Result<(WeylElement, WeylElement)> {
        let mut a = args()?;
        if a.len() != 2 {
            return Err(bad());
        }
        let b = a.pop().unwrap();
        Ok((a.pop().unwrap(), b))
    };
    let rational_field = |key: &str| -> Result<Rational> {
        match obj.get(key) {
            Some(Value::String(s)) => parse_rational(s),
            Some(Value::Number(n)) => parse_rational(&n.to_string()),
            _ => Err(bad()),
        }
    };
    let arg = || obj.get("arg").ok_or_else(bad).and_then(eval);
    match op {
        "star" => args().map(|a| a.iter().fold(WeylElement::one(), |acc, x| star(&acc, x))),
        "add" => args().map(|a| a.iter().fold(WeylElement::zero(), |acc, x| acc.add(x))),
        "sub" => two().map(|(a, b)| a.sub(&b)),
        "bracket" => two().map(|(a, b)| bracket(&a, &b)),
        "poisson" => two().and_then(|(a, b)| poisson(&a, &b)),
        "scale" => Ok(arg()?.scale(&rational_field("c")?)),
        "symbol" => {
            let m2 = rational_field("m")? * Rational::from_integer(BigInt::from(2));
            if !m2.is_integer() {
                return Err(bad());
            }
            symbol(&arg()?, i64::try_from(m2.to_integer()).map_err(|_| bad())?)
        }
        _ => Err(bad()),
    }
}
