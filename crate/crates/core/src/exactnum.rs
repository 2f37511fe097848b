//! Exact scalars.
//!
//! Rationals are `num_rational::BigRational` (always reduced, positive
//! denominator). Complex parameters are modelled by [`ParamScalar`], an
//! element `r + t·τ` of the two-dimensional ℚ-algebra ℚ ⊕ ℚτ where τ is a
//! formal transcendental. The fixed ℚ-linear projection `pr` drops the
//! τ-part.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() {
        return Err(err());
    }
    match t.split_once('/') {
        None => BigInt::from_str(t).map(Rational::from_integer).map_err(|_| err()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
    }
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Least common multiple of the denominators, 1 for an empty iterator.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Serde helpers for `Rational` as a "p/q" string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod rational_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| BigInt::from_str(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// An element `rat + tau·τ` of ℚ ⊕ ℚτ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamScalar {
    pub rat: Rational,
    pub tau: Rational,
}

impl ParamScalar {
    pub fn new(rat: Rational, tau: Rational) -> Self {
        ParamScalar { rat, tau }
    }

    pub fn zero() -> Self {
        ParamScalar::new(Rational::zero(), Rational::zero())
    }

    pub fn tau_unit() -> Self {
        ParamScalar::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ParamScalar::from(int(n))
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.tau.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.tau.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.tau.is_zero() && self.rat.is_integer()
    }

    /// The fixed ℚ-linear projection onto the rational part.
    pub fn pr(&self) -> Rational {
        self.rat.clone()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        ParamScalar::new(&self.rat * q, &self.tau * q)
    }

    pub fn checked_mul(&self, other: &ParamScalar) -> Result<Self> {
        if !self.tau.is_zero() && !other.tau.is_zero() {
            return Err(Error::TauProductUnsupported);
        }
        Ok(ParamScalar::new(
            &self.rat * &other.rat,
            &self.rat * &other.tau + &self.tau * &other.rat,
        ))
    }

    pub fn div_rational(&self, q: &Rational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ParamScalar::new(&self.rat / q, &self.tau / q))
    }
}

impl From<Rational> for ParamScalar {
    fn from(rat: Rational) -> Self {
        ParamScalar::new(rat, Rational::zero())
    }
}

impl Add for ParamScalar {
    type Output = ParamScalar;
    fn add(self, o: ParamScalar) -> ParamScalar {
        ParamScalar::new(self.rat + o.rat, self.tau + o.tau)
    }
}

impl<'a> Add<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn add(self, o: &ParamScalar) -> ParamScalar {
        ParamScalar::new(&self.rat + &o.rat, &self.tau + &o.tau)
    }
}

impl Sub for ParamScalar {
    type Output = ParamScalar;
    fn sub(self, o: ParamScalar) -> ParamScalar {
        ParamScalar::new(self.rat - o.rat, self.tau - o.tau)
    }
}

impl<'a> Sub<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn sub(self, o: &ParamScalar) -> ParamScalar {
        ParamScalar::new(&self.rat - &o.rat, &self.tau - &o.tau)
    }
}

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar::new(-self.rat, -self.tau)
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tau.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return write!(f, "{}T", self.tau);
        }
        if self.tau.is_negative() {
            write!(f, "{}-{}T", self.rat, -&self.tau)
        } else {
            write!(f, "{}+{}T", self.rat, self.tau)
        }
    }
}

impl FromStr for ParamScalar {
    type Err = Error;

    /// Accepts `p/q`, `p/q+r/sT`, `p/q-r/sT`, `r/sT`, `T`, `-T`, `2+T`.
    /// `τ` is accepted in place of `T`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "parameter scalar",
            input: s.to_string(),
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.replace('τ', "T");
        let Some(body) = t.strip_suffix('T') else {
            return parse_rational(&t).map(ParamScalar::from).map_err(|_| err());
        };
        // The split is at the last sign that is not leading.
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (rat_part, tau_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let rat = if rat_part.is_empty() {
            Rational::zero()
        } else {
            parse_rational(rat_part).map_err(|_| err())?
        };
        let tau = match tau_part {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other).map_err(|_| err())?,
        };
        Ok(ParamScalar::new(rat, tau))
    }
}

impl Serialize for ParamScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ParamScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse a comma-separated list of parameter scalars, e.g. `"1/2,1/3+T"`.
pub fn parse_param_csv(s: &str) -> Result<Vec<ParamScalar>> {
    s.split(',').map(str::parse).collect()
}

pub fn parse_rational_csv(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

pub fn pr_vec(v: &[ParamScalar]) -> Vec<Rational> {
    v.iter().map(ParamScalar::pr).collect()
}
