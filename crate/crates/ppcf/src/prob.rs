//! Exact rational arithmetic and the `[0,1]` probability carrier.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Exact rational scalar used throughout the workbench.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProbError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(String),
}

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_nat(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// 2^-k.
pub fn pow2_neg(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(2u8).pow(k))
}

/// Canonical rendering: lowest terms, `p/q`, denominator elided when 1.
pub fn show_rat(r: &Rat) -> String {
    r.to_string()
}

/// Parses `p` or `p/q` (optionally signed) into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat, ProbError> {
    let bad = || ProbError::Malformed(s.to_string());
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(numer, denom))
}

/// A rational constrained to [0, 1].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prob(Rat);

impl Prob {
    pub fn new(r: Rat) -> Result<Prob, ProbError> {
        if r.is_negative() || r > Rat::one() {
            return Err(ProbError::OutOfRange(show_rat(&r)));
        }
        Ok(Prob(r))
    }

    pub fn parse(s: &str) -> Result<Prob, ProbError> {
        Prob::new(parse_rat(s)?)
    }

    pub fn zero() -> Prob {
        Prob(Rat::zero())
    }

    pub fn one() -> Prob {
        Prob(Rat::one())
    }

    pub fn rat(&self) -> &Rat {
        &self.0
    }

    pub fn complement(&self) -> Prob {
        Prob(Rat::one() - &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
