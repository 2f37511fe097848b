//! Integer matrices and the lattice sequence `0 → ℤ^{n−d} → ℤ^n → ℤ^d`.

pub mod minors;
pub mod rational;
pub mod snf;
mod span;

use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

pub use minors::{determinant, is_unimodular, maximal_minors, minors_coprime};
pub use snf::{smith_normal_form, SmithForm};
pub use span::{in_integer_span, in_lattice_image, in_rational_span, solve_integer, LatticeMembership};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    /// Build from rows; every row must have the same length.
    pub fn from_rows(entries: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        if let Some(bad) = entries.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(Self {
            rows: entries.len(),
            cols,
            entries,
        })
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<Vec<BigInt>>) -> Self {
        Self::from_rows(entries).expect("rectangular")
    }

    /// Convenience constructor for literals. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_entries_unchecked(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = BigInt::from(1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Vec<BigInt>> {
        self.entries
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    /// Column `j` as a rational vector.
    pub fn column_q(&self, j: usize) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|r| Rational::from_integer(r[j].clone()))
            .collect()
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            rows: self.rows,
            cols: cols.len(),
            entries: self
                .entries
                .iter()
                .map(|r| cols.iter().map(|&j| r[j].clone()).collect())
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: (0..self.cols).map(|j| self.column(j)).collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let entries = self
            .entries
            .iter()
            .map(|row| {
                (0..other.cols)
                    .map(|j| {
                        row.iter()
                            .zip(&other.entries)
                            .map(|(a, orow)| a * &orow[j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_vec_q(&self, x: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .map(|(a, b)| b * Rational::from_integer(a.clone()))
                    .sum()
            })
            .collect()
    }

    pub fn to_rational(&self) -> Vec<Vec<Rational>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        rational::rank(&self.to_rational())
    }

    pub fn is_zero_column(&self, j: usize) -> bool {
        self.entries.iter().all(|r| r[j].is_zero())
    }

    /// `{"d": rows, "n": cols, "entries": [[…]]}`; entries that do not fit
    /// in an `i64` are written as decimal strings.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|r| Value::Array(r.iter().map(bigint_to_json).collect()))
            .collect();
        serde_json::json!({ "d": self.rows, "n": self.cols, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let shape = |key: &str| -> Result<usize> {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::validation("json_shape", format!("missing or invalid \"{key}\"")))
        };
        let (d, n) = (shape("d")?, shape("n")?);
        let rows = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::validation("json_shape", "missing \"entries\" array"))?;
        if rows.len() != d {
            return Err(Error::validation(
                "json_shape",
                format!("declared d={d} but entries has {} rows", rows.len()),
            ));
        }
        let mut entries = Vec::with_capacity(d);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::validation("json_shape", "entries rows must be arrays"))?;
            if row.len() != n {
                return Err(Error::validation(
                    "json_shape",
                    format!("declared n={n} but a row has {} entries", row.len()),
                ));
            }
            entries.push(row.iter().map(bigint_from_json).collect::<Result<Vec<_>>>()?);
        }
        Ok(Self {
            rows: d,
            cols: n,
            entries,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse {
            what: "matrix json",
            input: e.to_string(),
        })?;
        Self::from_json(&v)
    }
}

fn bigint_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

fn bigint_from_json(v: &Value) -> Result<BigInt> {
    let bad = || Error::validation("integer_entries", format!("not an integer: {v}"));
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(bad),
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i][j]
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        IntMatrix::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// A torus-action weight matrix: `1 ≤ d < n`, no zero column, coprime
/// maximal minors. Dereferences to the underlying [`IntMatrix`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionMatrix(IntMatrix);

impl ActionMatrix {
    pub fn new(a: IntMatrix) -> Result<Self> {
        let (d, n) = (a.rows(), a.cols());
        if d < 1 || d >= n {
            return Err(Error::validation(
                "d_less_than_n",
                format!("need 1 <= d < n, got d={d}, n={n}"),
            ));
        }
        if let Some(j) = (0..n).find(|&j| a.is_zero_column(j)) {
            return Err(Error::validation(
                "no_zero_column",
                format!("column {} is zero", j + 1),
            ));
        }
        if !minors_coprime(&a) {
            return Err(Error::validation(
                "coprime_minors",
                "the d x d minors are not relatively prime",
            ));
        }
        Ok(Self(a))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn d(&self) -> usize {
        self.0.rows()
    }

    pub fn n(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }
}

impl Deref for ActionMatrix {
    type Target = IntMatrix;
    fn deref(&self) -> &IntMatrix {
        &self.0
    }
}

impl Serialize for ActionMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Saturated integer basis of `ker(A : ℤ^n → ℤ^d)`, as the columns of an
/// `n × (n − rank)` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelBasis {
    pub b: IntMatrix,
}

impl KernelBasis {
    /// Indices (0-based) of rows of `B` that are identically zero.
    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.b.rows())
            .filter(|&i| self.b.entries()[i].iter().all(Zero::is_zero))
            .collect()
    }
}

pub fn kernel_basis(a: &IntMatrix) -> Result<KernelBasis> {
    let s = smith_normal_form(a);
    let r = s.rank();
    if r < a.rows() {
        return Err(Error::RankDeficient {
            rank: r,
            rows: a.rows(),
        });
    }
    let cols: Vec<usize> = (r..a.cols()).collect();
    Ok(KernelBasis {
        b: s.v.select_columns(&cols),
    })
}
