//! Seeded suites: generate, decompose, verify, cross-check against the
//! spectral oracle and decide with certified promise thresholds.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{gen_random_instance_with_headroom, random_unit_vector};
use crate::error::{bail, Result};
use crate::hamiltonian::{decompose_1sparse, normalize_shift, SparseHamiltonian};
use crate::oracle::{exact_spectrum_sparse, max_acceptance_over_witnesses, MAX_DENSE_DIM};
use crate::statevector::StateVector;
use crate::verifier::{
    compiled_acceptance, decide_stoqsh, rational, rational_from_f64, term_count, to_f64, Backend, Decision, Verifier,
    REPORT_FORMAT_VERSION,
};

/// Tolerance for every floating-point comparison in the suite.
pub const SUITE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Inclusive qubit range.
    pub n_range: (u32, u32),
    /// Inclusive sparsity range; draws above `2^n` are clamped.
    pub d_range: (usize, usize),
    pub ell: u32,
    pub instances: usize,
    /// Promise margin is `1 / (margin_denominator * d^2)`.
    #[serde(default = "default_margin_denominator")]
    pub margin_denominator: u32,
}

fn default_margin_denominator() -> u32 {
    8
}

impl ExperimentConfig {
    /// Ten instances on at most six qubits.
    pub fn smoke(seed: u64) -> Self {
        Self { seed, n_range: (2, 6), d_range: (1, 4), ell: 16, instances: 10, margin_denominator: 8 }
    }

    pub fn empty(seed: u64) -> Self {
        Self { instances: 0, ..Self::smoke(seed) }
    }

    pub fn validate(&self) -> Result<()> {
        let (n0, n1) = self.n_range;
        let (d0, d1) = self.d_range;
        if n0 == 0 || n0 > n1 || (1usize << n1) > MAX_DENSE_DIM {
            bail!(Argument, "n range {n0}..={n1} must be non-empty, start at 1 and fit the dense oracle");
        }
        if d0 == 0 || d0 > d1 {
            bail!(Argument, "d range {d0}..={d1} must be non-empty and start at 1");
        }
        if !(2..=40).contains(&self.ell) {
            bail!(Argument, "ell = {} outside 2..=40", self.ell);
        }
        if self.margin_denominator == 0 {
            bail!(Argument, "margin denominator must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Ground,
    RandomNonnegative,
    RandomSigned,
    Basis,
    Uniform,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 5] =
        [Self::Ground, Self::RandomNonnegative, Self::RandomSigned, Self::Basis, Self::Uniform];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ground => "ground",
            Self::RandomNonnegative => "random_nonnegative",
            Self::RandomSigned => "random_signed",
            Self::Basis => "basis",
            Self::Uniform => "uniform",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessRow {
    pub witness: WitnessKind,
    pub energy: f64,
    pub p1: f64,
    pub p2: f64,
    pub p: f64,
    pub analytic_p1: f64,
    pub analytic_p2: f64,
    pub analytic_p: f64,
    pub max_abs_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PromiseSide {
    pub alpha_raw: String,
    pub beta_raw: String,
    pub a: f64,
    pub b: f64,
    /// Yes side: compiled acceptance of the ground witness. No side: best
    /// compiled acceptance over all witnesses.
    pub compiled: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub id: usize,
    pub seed: u64,
    pub n: u32,
    pub d: usize,
    pub d_shifted: usize,
    pub ell: u32,
    pub nnz: usize,
    pub terms: usize,
    pub decomposition_ok: bool,
    pub lambda_min_raw: f64,
    /// Diagonal shift of the no-side instance.
    pub diagonal_shift: f64,
    pub oracle_error: f64,
    pub ground_nonnegative: bool,
    pub witnesses: Vec<WitnessRow>,
    pub yes: Option<PromiseSide>,
    pub no: Option<PromiseSide>,
    pub failures: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub format_version: u32,
    pub config: ExperimentConfig,
    pub instances: Vec<InstanceReport>,
    pub pass: bool,
}

fn witness_state(kind: WitnessKind, n: u32, ground: &[f64], rng: &mut ChaCha8Rng) -> Result<StateVector> {
    let n = n as usize;
    match kind {
        WitnessKind::Ground => StateVector::from_amplitudes(n, ground.to_vec()),
        WitnessKind::RandomNonnegative => StateVector::from_amplitudes(n, random_unit_vector(1 << n, false, rng)),
        WitnessKind::RandomSigned => StateVector::from_amplitudes(n, random_unit_vector(1 << n, true, rng)),
        WitnessKind::Basis => StateVector::basis(n, rng.random_range(0..1u128 << n)),
        WitnessKind::Uniform => StateVector::plus(n),
    }
}

/// Adds `shift / 2^ell` to every diagonal entry.
fn shift_diagonal(h: &SparseHamiltonian, shift: i64) -> Result<SparseHamiltonian> {
    let ell = h.ell();
    let mut entries = Vec::with_capacity(h.nnz() + h.dim() as usize);
    for x in 0..h.dim() {
        let mut diag = 0;
        for &(y, v) in h.row(x) {
            if y == x {
                diag = v.signed_numerator();
            } else if y > x {
                entries.push((x, y, v));
            }
        }
        entries.push((x, x, crate::fixed::FixedPoint::from_signed(diag + shift, ell)?));
    }
    let out = SparseHamiltonian::from_symmetric_entries(h.n(), usize::MAX, ell, entries)?;
    let d = h.d().max(out.max_row_nnz());
    out.with_sparsity(d)
}

/// Runs one instance. Yes side: `alpha = lambda_min + m`,
/// `beta = lambda_min + 2m` on the raw scale with `m = 1/(k d^2)`. No side: the same bounds on
/// `H + s I`, `s >= 3m` rounded up to an even numerator, which the generator
/// leaves room for.
pub fn run_instance(config: &ExperimentConfig, id: usize, seed: u64, n: u32, d: usize) -> Result<InstanceReport> {
    let ell = config.ell;
    let margin = rational(1, config.margin_denominator as i64 * (d * d) as i64);
    let one = 1i64 << ell;
    let scaled = 3.0 * to_f64(&margin) * one as f64;
    let headroom = ((scaled.ceil() as i64 + 1) & !1).min(one - 2);
    let h_raw = gen_random_instance_with_headroom(n, d, ell, headroom, seed)?;
    let h = normalize_shift(&h_raw)?;
    let mut failures = Vec::new();

    let terms = decompose_1sparse(&h);
    let decomposition_ok = terms.as_ref().is_ok_and(|t| t.len() == term_count(&h));
    if !decomposition_ok {
        failures.push(format!("decomposition: {:?}", terms.err()));
    }

    let spectrum = exact_spectrum_sparse(&h)?;
    let lambda_raw = 2.0 * spectrum.lambda_min() + 1.0;
    let verifier = Verifier::new(&h, Backend::Fast)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut witnesses = Vec::new();
    for kind in WitnessKind::ALL {
        let w = witness_state(kind, n, &spectrum.ground, &mut rng)?;
        let r = verifier.run(&w)?;
        let row = WitnessRow {
            witness: kind,
            energy: r.energy,
            p1: r.p1,
            p2: r.p2,
            p: r.p,
            analytic_p1: r.analytic_p1,
            analytic_p2: r.analytic_p2,
            analytic_p: r.analytic_p,
            max_abs_error: r.max_abs_error(),
        };
        if row.max_abs_error > SUITE_TOL {
            failures.push(format!("{} witness: protocol differs from formula by {}", kind.as_str(), row.max_abs_error));
        }
        witnesses.push(row);
    }
    let ground = &witnesses[0];
    let oracle_p = max_acceptance_over_witnesses(&h)?;
    let oracle_error = (ground.p - oracle_p).abs();
    if oracle_error > SUITE_TOL {
        failures.push(format!("ground witness acceptance differs from the spectral bound by {oracle_error}"));
    }
    if (ground.energy - spectrum.lambda_min()).abs() > 1e-10 {
        failures.push("nonnegative ground vector does not reach lambda_min".into());
    }

    let lambda = rational_from_f64(lambda_raw)?;
    let alpha = &lambda + &margin;
    let beta = &alpha + &margin;
    let (mut yes, mut no) = (None, None);
    if beta < rational(1, 1) {
        let w = StateVector::from_amplitudes(n as usize, spectrum.ground.clone())?;
        let rec = decide_stoqsh(&h_raw, &alpha, &beta, &w)?;
        let pass = rec.decision == Decision::Accept && rec.compiled_acceptance >= rec.thresholds.a - SUITE_TOL;
        if !pass {
            failures.push(format!("yes side: compiled {} below a = {}", rec.compiled_acceptance, rec.thresholds.a));
        }
        yes = Some(PromiseSide {
            alpha_raw: alpha.to_string(),
            beta_raw: beta.to_string(),
            a: rec.thresholds.a,
            b: rec.thresholds.b,
            compiled: rec.compiled_acceptance,
            pass,
        });

        let h_no_raw = shift_diagonal(&h_raw, headroom)?;
        let h_no = normalize_shift(&h_no_raw)?;
        let rec = decide_stoqsh(&h_no_raw, &alpha, &beta, &w)?;
        let best = compiled_acceptance(max_acceptance_over_witnesses(&h_no)?);
        let pass = best <= rec.thresholds.b + SUITE_TOL;
        if !pass {
            failures.push(format!("no side: best compiled {best} above b = {}", rec.thresholds.b));
        }
        no = Some(PromiseSide {
            alpha_raw: alpha.to_string(),
            beta_raw: beta.to_string(),
            a: rec.thresholds.a,
            b: rec.thresholds.b,
            compiled: best,
            pass,
        });
    }
    let pass = failures.is_empty();
    Ok(InstanceReport {
        id,
        seed,
        n,
        d,
        d_shifted: h.d(),
        ell,
        nnz: h_raw.nnz(),
        terms: term_count(&h),
        decomposition_ok,
        lambda_min_raw: lambda_raw,
        diagonal_shift: headroom as f64 / one as f64,
        oracle_error,
        ground_nonnegative: spectrum.ground_nonnegative,
        witnesses,
        yes,
        no,
        failures,
        pass,
    })
}

/// Instance parameters `(seed, n, d)` drawn from the config seed.
pub fn instance_plan(config: &ExperimentConfig) -> Vec<(u64, u32, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.instances)
        .map(|_| {
            let n = rng.random_range(config.n_range.0..=config.n_range.1);
            let d = rng.random_range(config.d_range.0..=config.d_range.1).min(1 << n);
            (rng.random(), n, d)
        })
        .collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let instances = instance_plan(config)
        .into_iter()
        .enumerate()
        .map(|(id, (seed, n, d))| run_instance(config, id, seed, n, d))
        .collect::<Result<Vec<_>>>()?;
    let pass = instances.iter().all(|i| i.pass);
    Ok(ExperimentReport { format_version: REPORT_FORMAT_VERSION, config: config.clone(), instances, pass })
}

pub const INSTANCES_CSV_HEADER: &str = "id,seed,n,d,d_shifted,ell,nnz,terms,decomposition_ok,lambda_min_raw,\
oracle_error,yes_a,yes_compiled,no_b,no_compiled,pass";

pub const WITNESSES_CSV_HEADER: &str =
    "id,witness,energy,p1,p2,p,analytic_p1,analytic_p2,analytic_p,max_abs_error";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn instances_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(INSTANCES_CSV_HEADER);
    out.push('\n');
    for i in &report.instances {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            i.id,
            i.seed,
            i.n,
            i.d,
            i.d_shifted,
            i.ell,
            i.nnz,
            i.terms,
            i.decomposition_ok,
            i.lambda_min_raw,
            i.oracle_error,
            opt(i.yes.as_ref().map(|s| s.a)),
            opt(i.yes.as_ref().map(|s| s.compiled)),
            opt(i.no.as_ref().map(|s| s.b)),
            opt(i.no.as_ref().map(|s| s.compiled)),
            i.pass
        );
    }
    out
}

pub fn witnesses_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(WITNESSES_CSV_HEADER);
    out.push('\n');
    for i in &report.instances {
        for w in &i.witnesses {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                i.id,
                w.witness.as_str(),
                w.energy,
                w.p1,
                w.p2,
                w.p,
                w.analytic_p1,
                w.analytic_p2,
                w.analytic_p,
                w.max_abs_error
            );
        }
    }
    out
}

/// Writes `instances.csv`, `witnesses.csv` and `report.json` into `dir`.
pub fn write_reports(report: &ExperimentReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("instances.csv"), instances_csv(report))?;
    std::fs::write(dir.join("witnesses.csv"), witnesses_csv(report))?;
    std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)? + "\n")?;
    Ok(())
}

/// Parses a config file, rejecting unknown fields and invalid ranges.
pub fn load_config(text: &str) -> Result<ExperimentConfig> {
    let c: ExperimentConfig = serde_json::from_str(text)?;
    c.validate()?;
    Ok(c)
}
