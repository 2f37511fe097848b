//! Exact combinatorics of hypertoric quantization parameters.
//!
//! Everything is exact: rationals are arbitrary precision and complex
//! parameters live in ℚ ⊕ ℚτ (see [`exactnum`]). No floating point is used
//! anywhere.

pub mod error;
pub mod exactnum;
pub mod lattice;
pub mod lp;
pub mod sign;
pub mod git_fan;
pub mod covectors;
pub mod comparability;
pub mod weyl;
pub mod cherednik;
pub mod report;

pub use error::{Error, Result};
pub use exactnum::{ParamScalar, Rational};
pub use lattice::{ActionMatrix, IntMatrix};
