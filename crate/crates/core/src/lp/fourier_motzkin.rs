//! Fourier–Motzkin elimination with multiplier tracking.
//!
//! Each derived row remembers the nonnegative combination of input rows it
//! came from, so an infeasible `0 ≥ c > 0` row is directly a Farkas vector.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::{Constraint, LpResult};
use crate::exactnum::Rational;

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
    mult: Vec<Rational>,
}

impl Row {
    fn scaled(&self, k: &Rational) -> Row {
        Row {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            rhs: &self.rhs * k,
            mult: self.mult.iter().map(|c| c * k).collect(),
        }
    }

    fn add(&self, other: &Row) -> Row {
        Row {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            rhs: &self.rhs + &other.rhs,
            mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect(),
        }
    }

    /// Scale so the first nonzero coefficient has absolute value 1.
    fn normalized(self) -> Row {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) => {
                let k = c.abs().recip();
                self.scaled(&k)
            }
            None => self,
        }
    }
}

pub(super) fn solve(constraints: &[Constraint], dim: usize) -> LpResult {
    let m = constraints.len();
    let mut rows: Vec<Row> = constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut mult = vec![Rational::zero(); m];
            mult[i] = Rational::one();
            Row {
                coeffs: c.coeffs.clone(),
                rhs: c.rhs.clone(),
                mult,
            }
            .normalized()
        })
        .collect();

    // levels[k] holds the system in variables 0..=k (variables > k eliminated).
    let mut levels: Vec<Vec<Row>> = Vec::with_capacity(dim);
    for k in (0..dim).rev() {
        rows = prune(rows);
        if let Some(bad) = contradiction(&rows) {
            return infeasible(bad);
        }
        levels.push(rows.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.coeffs[k].is_positive() {
                pos.push(r);
            } else if r.coeffs[k].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                let combined = p.scaled(&-q.coeffs[k].clone()).add(&q.scaled(&p.coeffs[k]));
                rest.push(combined.normalized());
            }
        }
        rows = rest;
    }
    rows = prune(rows);
    if let Some(bad) = contradiction(&rows) {
        return infeasible(bad);
    }

    levels.reverse();
    let mut x = vec![Rational::zero(); dim];
    for (k, level) in levels.iter().enumerate() {
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for r in level {
            let c = &r.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let rest: Rational = (0..k).map(|j| &r.coeffs[j] * &x[j]).sum();
            let bound = (&r.rhs - rest) / c;
            if c.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        x[k] = pick(lo, hi);
    }
    LpResult::Feasible { point: x }
}

/// A simple value in `[lo, hi]`: 0 if allowed, else the nearest integer
/// inside the interval, else the bound itself.
fn pick(lo: Option<Rational>, hi: Option<Rational>) -> Rational {
    let zero = Rational::zero();
    let above_lo = |v: &Rational| lo.as_ref().is_none_or(|l| v >= l);
    let below_hi = |v: &Rational| hi.as_ref().is_none_or(|h| v <= h);
    if above_lo(&zero) && below_hi(&zero) {
        return zero;
    }
    if let Some(l) = lo.as_ref().filter(|l| l.is_positive()) {
        let t = l.ceil();
        return if below_hi(&t) { t } else { l.clone() };
    }
    let h = hi.expect("interval excludes 0 from one side");
    let t = h.floor();
    if above_lo(&t) {
        t
    } else {
        h
    }
}

/// Drop trivially true rows and keep only the strongest of parallel rows.
fn prune(rows: Vec<Row>) -> Vec<Row> {
    let mut best: HashMap<Vec<Rational>, Row> = HashMap::new();
    let mut order = Vec::new();
    for r in rows {
        let trivial = r.coeffs.iter().all(Zero::is_zero) && !r.rhs.is_positive();
        if trivial {
            continue;
        }
        match best.get_mut(&r.coeffs) {
            Some(existing) => {
                if r.rhs > existing.rhs {
                    *existing = r;
                }
            }
            None => {
                order.push(r.coeffs.clone());
                best.insert(r.coeffs.clone(), r);
            }
        }
    }
    order.into_iter().map(|k| best.remove(&k).unwrap()).collect()
}

fn contradiction(rows: &[Row]) -> Option<&Row> {
    rows.iter()
        .find(|r| r.coeffs.iter().all(Zero::is_zero) && r.rhs.is_positive())
}

fn infeasible(row: &Row) -> LpResult {
    LpResult::Infeasible {
        farkas: row.mult.clone(),
    }
}
