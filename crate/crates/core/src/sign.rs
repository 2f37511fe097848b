use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn of(x: &Rational) -> Sign {
        if x.is_positive() {
            Sign::Plus
        } else if x.is_zero() {
            Sign::Zero
        } else {
            Sign::Minus
        }
    }

    pub fn of_int(x: &num_bigint::BigInt) -> Sign {
        Sign::of(&Rational::from_integer(x.clone()))
    }


    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
            Sign::Plus => Sign::Minus,
        }
    }
}

/// Render a sign vector as a compact string like `"+0-"`.
pub fn format_signs(s: &[Sign]) -> String {
    s.iter().map(|x| x.as_char()).collect()
}

/// Parse `"+0-"`; the typographic minus `−` is accepted too.
pub fn parse_signs(s: &str) -> Result<Vec<Sign>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' => Ok(Sign::Plus),
            '0' => Ok(Sign::Zero),
            '-' | '−' => Ok(Sign::Minus),
            _ => Err(Error::Parse {
                what: "sign vector",
                input: s.to_string(),
            }),
        })
        .collect()
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.as_char())
    }
}

/// Serde helper: a `Vec<Sign>` as one string.
pub mod signs_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Sign], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_signs(v))
    }
}
