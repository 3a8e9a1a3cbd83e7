use num::rational::BigRational;
use num::{BigInt, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{bail, Result};

/// Decision thresholds in the shifted convention (entries in `[-1, 0]`).
/// `a_prime`, `b_prime` bound the combined verifier; `a`, `b` bound its
/// compiled single-qubit form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub a_prime: BigRational,
    pub b_prime: BigRational,
    pub a: BigRational,
    pub b: BigRational,
}

/// Floating view of [`Thresholds`] for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdValues {
    pub a_prime: f64,
    pub b_prime: f64,
    pub a: f64,
    pub b: f64,
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational for a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    match BigRational::from_float(x) {
        Some(r) => Ok(r),
        None => bail!(Argument, "{x} is not a finite number"),
    }
}

/// Parses `p/q`, an integer or a terminating decimal such as `-0.125`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || crate::Error::Parse(format!("bad rational {text:?}"));
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let r = BigRational::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    let r: BigRational = t.parse().map_err(|_| bad())?;
    Ok(r)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Thresholds {
    pub fn values(&self) -> ThresholdValues {
        ThresholdValues {
            a_prime: to_f64(&self.a_prime),
            b_prime: to_f64(&self.b_prime),
            a: to_f64(&self.a),
            b: to_f64(&self.b),
        }
    }
}

/// `a' = 1/2 + |alpha|/(4d^2)`, `b' = 1/2 + |beta|/(4d^2)`, `a = (1+a')/2`,
/// `b = (1+b')/2`, for `alpha < beta <= 0`.
pub fn stoqsh_thresholds(alpha: &BigRational, beta: &BigRational, d: usize) -> Result<Thresholds> {
    if alpha.is_positive() || beta.is_positive() {
        bail!(Convention, "thresholds need alpha, beta <= 0 (shifted convention), got {alpha}, {beta}");
    }
    if alpha >= beta {
        bail!(Argument, "thresholds need alpha < beta, got {alpha} >= {beta}");
    }
    let dd = BigRational::from_integer(BigInt::from(d.max(1) as u64).pow(2u32));
    let half = rational(1, 2);
    let four_d2 = &dd * BigRational::from_integer(4.into());
    let a_prime = &half + alpha.abs() / &four_d2;
    let b_prime = &half + beta.abs() / &four_d2;
    let one = BigRational::from_integer(1.into());
    let a = (&one + &a_prime) / BigRational::from_integer(2.into());
    let b = (&one + &b_prime) / BigRational::from_integer(2.into());
    let gap = (beta - alpha) / (&dd * BigRational::from_integer(8.into()));
    if &a - &b != gap || gap.is_zero() {
        bail!(Invariant, "threshold gap identity failed");
    }
    Ok(Thresholds { a_prime, b_prime, a, b })
}

/// `(x - 1)/2`: energy bound in the shifted convention.
pub fn shift_bound(raw: &BigRational) -> BigRational {
    (raw - BigRational::from_integer(1.into())) / BigRational::from_integer(2.into())
}
