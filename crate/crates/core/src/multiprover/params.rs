use num::rational::BigRational;
use num::One;
use serde::Serialize;

use crate::error::{bail, Result};
use crate::verifier::{rational, to_f64};

/// Completeness/soundness parameters through the protocol maps: the
/// multi-register to two-prover map `(c1, s1)`, the single-qubit compilation
/// `(cc, sc)` of the input pair, and the composition `(c2, s2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMap {
    pub c: BigRational,
    pub s: BigRational,
    pub c1: BigRational,
    pub s1: BigRational,
    pub cc: BigRational,
    pub sc: BigRational,
    pub c2: BigRational,
    pub s2: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamValues {
    pub c: f64,
    pub s: f64,
    pub c1: f64,
    pub s1: f64,
    pub cc: f64,
    pub sc: f64,
    pub c2: f64,
    pub s2: f64,
    pub in_region: bool,
}

fn compile(x: &BigRational) -> BigRational {
    (BigRational::one() + x) / rational(2, 1)
}

/// `(s^2 - 2s)^2`.
fn sq_term(s: &BigRational) -> BigRational {
    let t = s * s - s * rational(2, 1);
    &t * &t
}

fn check_unit_half(name: &str, x: &BigRational) -> Result<()> {
    if x < &rational(1, 2) || x > &rational(1, 1) {
        bail!(Argument, "{name} = {x} outside [1/2, 1]");
    }
    Ok(())
}

pub fn param_maps(c: &BigRational, s: &BigRational) -> Result<ParamMap> {
    check_unit_half("c", c)?;
    check_unit_half("s", s)?;
    let c1 = compile(c);
    let s1 = rational(5, 6) + sq_term(s) / rational(6, 1);
    let c2 = compile(&c1);
    let s2 = compile(&s1);
    Ok(ParamMap { c: c.clone(), s: s.clone(), cc: compile(c), sc: compile(s), c1, s1, c2, s2 })
}

impl ParamMap {
    /// `c2 = (3 + c)/4`, `s2 = 11/12 + (s^2 - 2s)^2 / 12`.
    pub fn closed_form_holds(&self) -> bool {
        self.c2 == (rational(3, 1) + &self.c) / rational(4, 1)
            && self.s2 == rational(11, 12) + sq_term(&self.s) / rational(12, 1)
    }

    pub fn in_region(&self) -> bool {
        self.c2 > self.s2
    }

    pub fn values(&self) -> ParamValues {
        ParamValues {
            c: to_f64(&self.c),
            s: to_f64(&self.s),
            c1: to_f64(&self.c1),
            s1: to_f64(&self.s1),
            cc: to_f64(&self.cc),
            sc: to_f64(&self.sc),
            c2: to_f64(&self.c2),
            s2: to_f64(&self.s2),
            in_region: self.in_region(),
        }
    }
}

/// `(2 + (s^2 - 2s)^2) / 3`.
pub fn region_boundary(s: &BigRational) -> BigRational {
    (rational(2, 1) + sq_term(s)) / rational(3, 1)
}

/// `c2 > s2`, equivalently `c > (2 + (s^2 - 2s)^2)/3`.
pub fn region_contains(c: &BigRational, s: &BigRational) -> Result<bool> {
    Ok(param_maps(c, s)?.in_region())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionPoint {
    pub s: f64,
    pub boundary_c: f64,
    pub c2_minus_s2_at_boundary: f64,
}

/// Boundary of the feasible region at `resolution + 1` evenly spaced values
/// of `s` in `[1/2, 1]`.
pub fn region_curve(resolution: usize) -> Result<Vec<RegionPoint>> {
    if resolution == 0 {
        bail!(Argument, "resolution must be positive");
    }
    (0..=resolution)
        .map(|i| {
            let s = rational(1, 2) + rational(i as i64, 2 * resolution as i64);
            let c = region_boundary(&s);
            let m = param_maps(&c, &s)?;
            Ok(RegionPoint { s: to_f64(&s), boundary_c: to_f64(&c), c2_minus_s2_at_boundary: to_f64(&(&m.c2 - &m.s2)) })
        })
        .collect()
}

pub const REGION_CSV_HEADER: &str = "s,boundary_c,c2_minus_s2_at_boundary";

pub fn region_csv(points: &[RegionPoint]) -> String {
    let mut out = String::from(REGION_CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!("{},{},{}\n", p.s, p.boundary_c, p.c2_minus_s2_at_boundary));
    }
    out
}

/// `1 - eps + eps^2` for `eps <= 1/2`, else `1 - 2 eps / 3 + eps^2 / 3`.
pub fn sw_bound(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        bail!(Argument, "eps = {eps} outside [0, 1]");
    }
    Ok(if eps <= 0.5 { 1.0 - eps + eps * eps } else { 1.0 - 2.0 * eps / 3.0 + eps * eps / 3.0 })
}

const HELPER_TOL: f64 = 1e-12;

/// `4(x^2 + y^2) - 8(x^4 + y^4) >= 2 z^2 - z^4` for `x, y >= 0`, `x + y = z`,
/// `z <= 1/2`.
pub fn helper_inequality_check(x: f64, y: f64, z: f64) -> Result<bool> {
    if x < 0.0 || y < 0.0 || z > 0.5 + HELPER_TOL || (x + y - z).abs() > HELPER_TOL {
        bail!(Argument, "need x, y >= 0, x + y = z <= 1/2; got ({x}, {y}, {z})");
    }
    let lhs = 4.0 * (x * x + y * y) - 8.0 * (x.powi(4) + y.powi(4));
    let rhs = 2.0 * z * z - z.powi(4);
    Ok(lhs >= rhs - HELPER_TOL)
}

/// Exact version of the helper inequality's slack `lhs - rhs`.
pub fn helper_slack_exact(x: &BigRational, y: &BigRational) -> BigRational {
    let z = x + y;
    let p4 = |t: &BigRational| t * t * t * t;
    rational(4, 1) * (x * x + y * y) - rational(8, 1) * (p4(x) + p4(y)) - (rational(2, 1) * &z * &z - p4(&z))
}
