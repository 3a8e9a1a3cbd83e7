//! The two verification procedures, their combination, closed-form
//! acceptance probabilities and decision thresholds.

mod circuits;
mod thresholds;

use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use circuits::{prepare_cx, v1_term_circuit, v2_term_circuit, Backend, CxFragment, Procedure, TermCircuit};
pub use thresholds::{
    parse_rational, rational, rational_from_f64, shift_bound, stoqsh_thresholds, to_f64, ThresholdValues, Thresholds,
};

use crate::error::{bail, Result};
use crate::hamiltonian::{decompose_1sparse, normalize_shift, OneSparseTerm, SparseHamiltonian};
use crate::statevector::{acceptance_over_register, RegisterClass, SparseState, StateVector};

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// Classes of the comparison register: `[y < k]` is constant on each
/// interval between consecutive numerators of the term.
pub fn register_classes(term: &OneSparseTerm) -> Vec<RegisterClass> {
    let ell = term.ell();
    let top = 1u128 << ell;
    let mut cuts: Vec<u128> = vec![0, top];
    cuts.extend(term.numerators().into_iter().map(u128::from));
    cuts.sort_unstable();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| RegisterClass { value: w[0], weight: (w[1] - w[0]) as f64 / top as f64 })
        .collect()
}

fn base_state(tc: &TermCircuit, witness: &SparseState) -> Result<SparseState> {
    let l = &tc.circuit.layout;
    if witness.qubits() != l.witness {
        bail!(Argument, "witness has {} qubits, term expects {}", witness.qubits(), l.witness);
    }
    witness
        .tensor(&SparseState::basis(l.zero, 0)?)?
        .tensor(&SparseState::plus(tc.controls.len())?)?
        .tensor(&SparseState::basis(tc.y.len(), 0)?)
}

/// Acceptance probability of a term circuit, averaging over the comparison
/// register classically.
pub fn run_term(tc: &TermCircuit, term: &OneSparseTerm, witness: &SparseState) -> Result<f64> {
    let base = base_state(tc, witness)?;
    acceptance_over_register(&base, &tc.circuit.gates, &tc.y, &register_classes(term), &tc.projector)
}

/// Acceptance probability of a term circuit by plain dense simulation, `y`
/// register included. Only feasible for small `n` and `ell`.
pub fn run_term_dense(tc: &TermCircuit, witness: &StateVector) -> Result<f64> {
    tc.circuit.acceptance(&[], witness, &tc.projector)
}

pub fn run_v1_term(term: &OneSparseTerm, witness: &StateVector) -> Result<f64> {
    run_term(&v1_term_circuit(term, Backend::Fast)?, term, &SparseState::from_dense(witness))
}

pub fn run_v2_term(term: &OneSparseTerm, witness: &StateVector) -> Result<f64> {
    run_term(&v2_term_circuit(term, Backend::Fast)?, term, &SparseState::from_dense(witness))
}

/// `1/2 sum_x psi_x^2 |H_j[x,f(x)]| + 1/2 <psi|-H_j|psi>`.
pub fn analytic_v1_term(term: &OneSparseTerm, psi: &[f64]) -> f64 {
    0.5 * term.weighted_magnitude(psi) - 0.5 * term.expectation(psi)
}

/// `1 - 1/2 sum_x psi_x^2 |H_j[x,f(x)]|`.
pub fn analytic_v2_term(term: &OneSparseTerm, psi: &[f64]) -> f64 {
    1.0 - 0.5 * term.weighted_magnitude(psi)
}

/// Number of terms the verifier averages over.
pub fn term_count(h: &SparseHamiltonian) -> usize {
    (h.d() * h.d()).max(1)
}

/// `sum_x psi_x^2 sum_y |H[x,y]|`, computed from the rows of `h`.
fn row_weighted_magnitude(h: &SparseHamiltonian, psi: &[f64]) -> f64 {
    h.rows()
        .iter()
        .zip(psi)
        .map(|(row, a)| a * a * row.iter().map(|(_, v)| v.magnitude()).sum::<f64>())
        .sum()
}

pub fn analytic_v1(h: &SparseHamiltonian, psi: &[f64]) -> f64 {
    let dd = term_count(h) as f64;
    (row_weighted_magnitude(h, psi) - h.expectation(psi)) / (2.0 * dd)
}

pub fn analytic_v2(h: &SparseHamiltonian, psi: &[f64]) -> f64 {
    1.0 - row_weighted_magnitude(h, psi) / (2.0 * term_count(h) as f64)
}

/// `1/2 - <psi|H|psi>/(4 d^2)`.
pub fn analytic_v(h: &SparseHamiltonian, psi: &[f64]) -> f64 {
    0.5 - h.expectation(psi) / (4.0 * term_count(h) as f64)
}

/// Acceptance of the single-qubit compiled form of a verifier accepting with
/// probability `p`.
pub fn compiled_acceptance(p: f64) -> f64 {
    0.5 + 0.5 * p
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifierReport {
    pub format_version: u32,
    pub n: u32,
    pub d: usize,
    pub terms: usize,
    pub energy: f64,
    pub p1_terms: Vec<f64>,
    pub p2_terms: Vec<f64>,
    pub p1: f64,
    pub p2: f64,
    pub p: f64,
    pub analytic_p1: f64,
    pub analytic_p2: f64,
    pub analytic_p: f64,
    pub compiled_p: f64,
}

impl VerifierReport {
    pub fn max_abs_error(&self) -> f64 {
        [self.p1 - self.analytic_p1, self.p2 - self.analytic_p2, self.p - self.analytic_p]
            .iter()
            .fold(0.0f64, |m, e| m.max(e.abs()))
    }
}

/// A normalized Hamiltonian with its decomposition and per-term circuits.
#[derive(Clone, Debug)]
pub struct Verifier {
    h: SparseHamiltonian,
    terms: Vec<OneSparseTerm>,
    v1: Vec<TermCircuit>,
    v2: Vec<TermCircuit>,
}

impl Verifier {
    pub fn new(h: &SparseHamiltonian, backend: Backend) -> Result<Self> {
        if !h.is_normalized() {
            bail!(Convention, "verifier needs entries in [-1, 0]; apply normalize_shift first");
        }
        let terms = decompose_1sparse(h)?;
        let v1 = terms.iter().map(|t| v1_term_circuit(t, backend)).collect::<Result<_>>()?;
        let v2 = terms.iter().map(|t| v2_term_circuit(t, backend)).collect::<Result<_>>()?;
        Ok(Self { h: h.clone(), terms, v1, v2 })
    }

    pub fn hamiltonian(&self) -> &SparseHamiltonian {
        &self.h
    }

    pub fn terms(&self) -> &[OneSparseTerm] {
        &self.terms
    }

    pub fn v1_circuits(&self) -> &[TermCircuit] {
        &self.v1
    }

    pub fn v2_circuits(&self) -> &[TermCircuit] {
        &self.v2
    }

    fn sparse_witness(&self, witness: &StateVector) -> Result<SparseState> {
        if witness.qubits() != self.h.n() as usize {
            bail!(Argument, "witness has {} qubits, Hamiltonian has {}", witness.qubits(), self.h.n());
        }
        Ok(SparseState::from_dense(witness))
    }

    pub fn v1_terms(&self, witness: &StateVector) -> Result<Vec<f64>> {
        let w = self.sparse_witness(witness)?;
        self.v1.iter().zip(&self.terms).map(|(tc, t)| run_term(tc, t, &w)).collect()
    }

    pub fn v2_terms(&self, witness: &StateVector) -> Result<Vec<f64>> {
        let w = self.sparse_witness(witness)?;
        self.v2.iter().zip(&self.terms).map(|(tc, t)| run_term(tc, t, &w)).collect()
    }

    pub fn run(&self, witness: &StateVector) -> Result<VerifierReport> {
        let p1_terms = self.v1_terms(witness)?;
        let p2_terms = self.v2_terms(witness)?;
        let dd = self.terms.len() as f64;
        let p1 = p1_terms.iter().sum::<f64>() / dd;
        let p2 = p2_terms.iter().sum::<f64>() / dd;
        let p = 0.5 * (p1 + p2);
        let psi = witness.amplitudes();
        Ok(VerifierReport {
            format_version: REPORT_FORMAT_VERSION,
            n: self.h.n(),
            d: self.h.d(),
            terms: self.terms.len(),
            energy: self.h.expectation(psi),
            p1_terms,
            p2_terms,
            p1,
            p2,
            p,
            analytic_p1: analytic_v1(&self.h, psi),
            analytic_p2: analytic_v2(&self.h, psi),
            analytic_p: analytic_v(&self.h, psi),
            compiled_p: compiled_acceptance(p),
        })
    }

    /// Monte-Carlo estimate of the combined verifier: draw the procedure and
    /// term uniformly, then accept with that run's probability.
    pub fn sample(&self, witness: &StateVector, shots: usize, seed: u64) -> Result<f64> {
        if shots == 0 {
            bail!(Argument, "need at least one shot");
        }
        let p1 = self.v1_terms(witness)?;
        let p2 = self.v2_terms(witness)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut accepted = 0usize;
        for _ in 0..shots {
            let j = rng.random_range(0..self.terms.len());
            let p = if rng.random_bool(0.5) { p1[j] } else { p2[j] };
            if rng.random::<f64>() < p {
                accepted += 1;
            }
        }
        Ok(accepted as f64 / shots as f64)
    }
}

pub fn run_v1(h: &SparseHamiltonian, witness: &StateVector) -> Result<f64> {
    Ok(Verifier::new(h, Backend::Fast)?.run(witness)?.p1)
}

pub fn run_v2(h: &SparseHamiltonian, witness: &StateVector) -> Result<f64> {
    Ok(Verifier::new(h, Backend::Fast)?.run(witness)?.p2)
}

pub fn run_v(h: &SparseHamiltonian, witness: &StateVector) -> Result<f64> {
    Ok(Verifier::new(h, Backend::Fast)?.run(witness)?.p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Compiled acceptance reached the completeness threshold `a`.
    Accept,
    /// The best acceptance over all witnesses (from an eigensolver) is at
    /// most the soundness threshold `b`.
    RejectByOracle,
    /// A single witness below `a` proves nothing.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Raw,
    Shifted,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecisionRecord {
    pub format_version: u32,
    pub convention: Convention,
    pub alpha_raw: Option<String>,
    pub beta_raw: Option<String>,
    pub alpha: String,
    pub beta: String,
    pub thresholds_exact: [String; 4],
    pub thresholds: ThresholdValues,
    pub report: VerifierReport,
    pub compiled_acceptance: f64,
    pub oracle_max_compiled: Option<f64>,
    pub decision: Decision,
}

const DECISION_SLACK: f64 = 1e-12;

impl DecisionRecord {
    /// Upgrades an inconclusive record when the best compiled acceptance over
    /// all witnesses is at most `b`.
    pub fn with_oracle_max(mut self, max_compiled: f64) -> Self {
        self.oracle_max_compiled = Some(max_compiled);
        if self.decision == Decision::Inconclusive && max_compiled <= self.thresholds.b + DECISION_SLACK {
            self.decision = Decision::RejectByOracle;
        }
        self
    }
}

/// Runs the combined verifier on an already shifted Hamiltonian and compares
/// the compiled acceptance with the thresholds for `(alpha, beta)`.
pub fn decide_shifted(
    h: &SparseHamiltonian,
    alpha: &BigRational,
    beta: &BigRational,
    witness: &StateVector,
) -> Result<DecisionRecord> {
    let t = stoqsh_thresholds(alpha, beta, h.d())?;
    let report = Verifier::new(h, Backend::Fast)?.run(witness)?;
    let values = t.values();
    let compiled = report.compiled_p;
    let decision = if compiled + DECISION_SLACK >= values.a { Decision::Accept } else { Decision::Inconclusive };
    Ok(DecisionRecord {
        format_version: REPORT_FORMAT_VERSION,
        convention: Convention::Shifted,
        alpha_raw: None,
        beta_raw: None,
        alpha: alpha.to_string(),
        beta: beta.to_string(),
        thresholds_exact: [t.a_prime.to_string(), t.b_prime.to_string(), t.a.to_string(), t.b.to_string()],
        thresholds: values,
        report,
        compiled_acceptance: compiled,
        oracle_max_compiled: None,
        decision,
    })
}

/// Shifts a raw `0 <= H <= I` instance and its bounds, then decides.
pub fn decide_stoqsh(
    h_raw: &SparseHamiltonian,
    alpha_raw: &BigRational,
    beta_raw: &BigRational,
    witness: &StateVector,
) -> Result<DecisionRecord> {
    if alpha_raw >= beta_raw {
        bail!(Argument, "need alpha < beta, got {alpha_raw} >= {beta_raw}");
    }
    let h = normalize_shift(h_raw)?;
    let mut rec = decide_shifted(&h, &shift_bound(alpha_raw), &shift_bound(beta_raw), witness)?;
    rec.convention = Convention::Raw;
    rec.alpha_raw = Some(alpha_raw.to_string());
    rec.beta_raw = Some(beta_raw.to_string());
    Ok(rec)
}
