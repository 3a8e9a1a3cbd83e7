//! Exact fixed-point matrix entries `sign * numerator / 2^precision`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

/// Largest supported precision. Numerators up to `2^62` fit an `i64` with
/// room for the sums taken by [`crate::hamiltonian::normalize_shift`].
pub const MAX_PRECISION: u32 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn from_i8(v: i8) -> Result<Self> {
        match v {
            -1 => Ok(Sign::Negative),
            0 => Ok(Sign::Zero),
            1 => Ok(Sign::Positive),
            _ => bail!(Argument, "sign must be -1, 0 or 1, got {v}"),
        }
    }
}

/// A real number in `[-1, 1]` stored exactly as `sign * numerator / 2^precision`.
///
/// `numerator == 0` exactly when `sign == Sign::Zero`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FixedPoint {
    numerator: u64,
    precision: u32,
    sign: Sign,
}

impl FixedPoint {
    pub fn new(sign: Sign, numerator: u64, precision: u32) -> Result<Self> {
        if precision > MAX_PRECISION {
            bail!(Precision, "precision {precision} exceeds {MAX_PRECISION} bits");
        }
        if numerator > 1u64 << precision {
            bail!(
                Precision,
                "numerator {numerator} exceeds 2^{precision}; magnitude must lie in [0, 1]"
            );
        }
        if (numerator == 0) != (sign == Sign::Zero) {
            bail!(Invariant, "numerator {numerator} inconsistent with sign {sign:?}");
        }
        Ok(Self { numerator, precision, sign })
    }

    pub fn zero(precision: u32) -> Self {
        Self { numerator: 0, precision, sign: Sign::Zero }
    }

    /// Builds a value from a signed numerator over `2^precision`.
    pub fn from_signed(value: i64, precision: u32) -> Result<Self> {
        let sign = match value.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        };
        Self::new(sign, value.unsigned_abs(), precision)
    }

    /// Exact conversion from a float; fails unless `value * 2^precision` is an
    /// integer.
    pub fn from_f64_exact(value: f64, precision: u32) -> Result<Self> {
        let scaled = value * (1u64 << precision) as f64;
        if !scaled.is_finite() || scaled.fract() != 0.0 || scaled.abs() > (1u64 << precision) as f64 {
            bail!(Precision, "{value} is not representable as k/2^{precision} with |k| <= 2^{precision}");
        }
        Self::from_signed(scaled as i64, precision)
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn signed_numerator(&self) -> i64 {
        self.sign.as_i8() as i64 * self.numerator as i64
    }

    pub fn magnitude(&self) -> f64 {
        self.numerator as f64 / (1u64 << self.precision) as f64
    }

    pub fn to_f64(&self) -> f64 {
        self.sign.as_i8() as f64 * self.magnitude()
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.signed_numerator(), self.precision)
    }
}
