use std::sync::OnceLock;

use nalgebra::DMatrix;
use num::rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    build_kitaev, h_init, h_prop, hardness_params, history_state, sparsity_census, spectral_gap, sweep_toy,
    ClockHamiltonian, SparsityCensus, ToyVerifier,
};
use crate::error::{bail, Result};
use crate::harness::random_unit_vector;
use crate::oracle::{grid_product_energy, optimal_product_state, real_state_grid, Bipartition};
use crate::statevector::StateVector;
use crate::verifier::to_f64;

/// Sweep range for the measured constant.
pub const SWEEP_STEPS: std::ops::RangeInclusive<usize> = 1..=6;

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub t: usize,
    pub dim: usize,
    pub lambda_2: f64,
    pub c_t: f64,
}

/// `lambda_2 (T+1)^3` of the sweep toys for `T` in [`SWEEP_STEPS`].
pub fn c_t_sweep() -> Result<Vec<SweepPoint>> {
    SWEEP_STEPS
        .map(|t| {
            let v = sweep_toy(t)?;
            let (gap, _) = spectral_gap(&(h_init(&v) + h_prop(&v)), t)?;
            Ok(SweepPoint { t, dim: (t + 1) << v.qubits(), lambda_2: gap.lambda_2, c_t: gap.c_t })
        })
        .collect()
}

/// Minimum measured `C_T` over the sweep; the default constant `C`.
pub fn default_c() -> Result<f64> {
    static CACHE: OnceLock<f64> = OnceLock::new();
    if let Some(&c) = CACHE.get() {
        return Ok(c);
    }
    let c = c_t_sweep()?.iter().map(|p| p.c_t).fold(f64::INFINITY, f64::min);
    Ok(*CACHE.get_or_init(|| c))
}

/// `delta` from [`hardness_params`] with constant `c_const`.
pub fn hardness_delta(c: &BigRational, s: &BigRational, t: usize, c_const: f64) -> Result<f64> {
    Ok(c_const * to_f64(&hardness_params(c, s, t)?.delta_over_c))
}

/// `(C A P1) | P2` split of the clock space; P2 occupies the low bits.
pub fn proof_cut(v: &ToyVerifier) -> Result<Bipartition> {
    if !v.has_swap_prefix() {
        bail!(Argument, "verifier has no two-proof structure");
    }
    let p = v.proof_qubits();
    Bipartition::blocks((v.steps() + 1) << (v.qubits() - p), 1 << p)
}

/// Largest squared Schmidt coefficient of `v` across `part`.
pub fn top_schmidt(v: &[f64], part: &Bipartition) -> f64 {
    let m = part.reshape(v);
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    top * top
}

/// Energy of the history state against `delta Pr[reject] / (T+1)`.
#[derive(Clone, Debug, Serialize)]
pub struct EnergyIdentity {
    pub energy: f64,
    pub predicted: f64,
    pub clean_energy: f64,
    pub error: f64,
}

pub fn energy_identity(v: &ToyVerifier, ham: &ClockHamiltonian, witness: &StateVector) -> Result<EnergyIdentity> {
    let eta = history_state(v, witness)?;
    let energy = ham.energy(&eta);
    let predicted = ham.delta * v.rejection(witness)? / (ham.t + 1) as f64;
    Ok(EnergyIdentity { energy, predicted, clean_energy: ham.clean_energy(&eta), error: (energy - predicted).abs() })
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletenessReport {
    pub honest_acceptance: f64,
    pub energy: f64,
    /// `delta (1 - c) / (T+1)`.
    pub bound: f64,
    pub identity_error: f64,
    pub top_schmidt: f64,
    pub pass: bool,
}

/// Yes case on the honest witness `psi ⊗ psi`. Fails with a promise error
/// if the honest acceptance is below `c`.
pub fn completeness_check(v: &ToyVerifier, ham: &ClockHamiltonian, c: f64, psi: &StateVector) -> Result<CompletenessReport> {
    let w = v.honest_witness(psi)?;
    let acc = v.acceptance(&w)?;
    if acc < c - 1e-12 {
        bail!(Promise, "honest acceptance {acc} is below c = {c}");
    }
    let id = energy_identity(v, ham, &w)?;
    let bound = ham.delta * (1.0 - c) / (ham.t + 1) as f64;
    let top = top_schmidt(&history_state(v, &w)?, &proof_cut(v)?);
    let pass = id.energy <= bound + 1e-10 && id.error <= 1e-10 && top >= 1.0 - 1e-10;
    Ok(CompletenessReport { honest_acceptance: acc, energy: id.energy, bound, identity_error: id.error, top_schmidt: top, pass })
}

/// Acceptance operator `<init| U^T Pi_acc U |init>` on the witness space.
pub fn acceptance_operator(v: &ToyVerifier) -> Result<DMatrix<f64>> {
    let dw = 1usize << v.witness();
    let mut finals = Vec::with_capacity(dw);
    for x in 0..dw {
        let traj = v.trajectory(&StateVector::basis(v.witness(), x as u128)?)?;
        let fin = traj.last().expect("non-empty").amplitudes().to_vec();
        let mut proj = fin.clone();
        v.accept().apply_dense(v.qubits(), &mut proj);
        finals.push((fin, proj));
    }
    Ok(DMatrix::from_fn(dw, dw, |i, j| finals[i].0.iter().zip(&finals[j].1).map(|(a, b)| a * b).sum()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductAcceptance {
    pub value: f64,
    pub alternating: f64,
    pub grid: Option<f64>,
    pub heuristic: bool,
}

/// Best acceptance over product witnesses `psi1 ⊗ psi2` (alternating
/// maximization, cross-checked by a grid for proofs of at most two qubits).
pub fn max_product_acceptance(v: &ToyVerifier, seed: u64) -> Result<ProductAcceptance> {
    if !v.has_swap_prefix() {
        bail!(Argument, "verifier has no two-proof structure");
    }
    let m = -acceptance_operator(v)?;
    let p = 1usize << v.proof_qubits();
    let part = Bipartition::blocks(p, p)?;
    let alternating = -optimal_product_state(&m, &part, seed)?.energy;
    let grid = if v.proof_qubits() <= 2 { Some(-grid_product_energy(&m, &part, 0.01)?) } else { None };
    Ok(ProductAcceptance { value: alternating.max(grid.unwrap_or(f64::NEG_INFINITY)), alternating, grid, heuristic: true })
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessReport {
    pub max_product_acceptance: f64,
    pub min_product_energy: f64,
    /// `(1 + (3/4)(c-s)/(1-c)) delta (1-c) / (T+1)`.
    pub threshold: f64,
    pub heuristic: bool,
    pub pass: bool,
}

/// Proofs of at most two qubits get a real grid, larger ones seeded random
/// states; used as honest-state seeds for the product minimization.
fn proof_family(p: usize, seed: u64) -> Result<Vec<StateVector>> {
    if p <= 2 {
        return real_state_grid(p, 0.05)?.into_iter().map(|a| StateVector::from_amplitudes(p, a)).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..64).map(|i| StateVector::from_amplitudes(p, random_unit_vector(1 << p, i % 2 == 1, &mut rng))).collect()
}

/// No case: minimum of `<w|H~|w>` over product states across `(C A P1)|P2`
/// from alternating minimization and history states of `psi ⊗ psi`. One-sided.
pub fn soundness_check(v: &ToyVerifier, ham: &ClockHamiltonian, c: f64, s: f64, seed: u64) -> Result<SoundnessReport> {
    let acc = max_product_acceptance(v, seed)?;
    if acc.value > s + 1e-9 {
        bail!(Promise, "a product witness is accepted with probability {} > s = {s}", acc.value);
    }
    let h = ham.total();
    let mut best = optimal_product_state(&h, &proof_cut(v)?, seed)?.energy;
    for psi in proof_family(v.proof_qubits(), seed)? {
        best = best.min(ham.energy(&history_state(v, &v.honest_witness(&psi)?)?));
    }
    let threshold = ham.delta / (ham.t + 1) as f64 * ((1.0 - c) + 0.75 * (c - s));
    Ok(SoundnessReport {
        max_product_acceptance: acc.value,
        min_product_energy: best,
        threshold,
        heuristic: true,
        pass: best >= threshold - 1e-8,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapCheck {
    pub eps: f64,
    pub reject_psi: f64,
    pub reject_phi: f64,
    pub bound: f64,
    pub energy_psi: f64,
    /// `delta/(T+1) (1 - s - 2 sqrt(eps))` when `phi` is rejected with
    /// probability at least `1 - s`.
    pub energy_lower: Option<f64>,
    pub holds: bool,
}

/// `|Pr[reject psi] - Pr[reject phi]| <= 2 sqrt(eps)` with
/// `|<psi|phi>|^2 = 1 - eps`, and the resulting history-energy lower bound.
pub fn overlap_check(v: &ToyVerifier, ham: &ClockHamiltonian, s: f64, psi: &StateVector, phi: &StateVector) -> Result<OverlapCheck> {
    let eps = (1.0 - psi.inner(phi).powi(2)).max(0.0);
    let (rp, rf) = (v.rejection(psi)?, v.rejection(phi)?);
    let bound = 2.0 * eps.sqrt();
    let energy_psi = ham.energy(&history_state(v, psi)?);
    let energy_lower = (rf >= 1.0 - s).then(|| ham.delta / (ham.t + 1) as f64 * (1.0 - s - bound));
    let holds = (rp - rf).abs() <= bound + 1e-12 && energy_lower.is_none_or(|lo| energy_psi >= lo - 1e-12);
    Ok(OverlapCheck { eps, reject_psi: rp, reject_phi: rf, bound, energy_psi, energy_lower, holds })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProximityReport {
    pub tested: usize,
    /// States with energy at most `alpha C / (T+1)^3`.
    pub low_energy: usize,
    pub min_kernel_weight: f64,
    /// Smallest product overlap of a recovered witness across P1|P2, with
    /// the matching `1 - eps (T+1)` bound.
    pub min_witness_overlap: f64,
    pub min_witness_bound: f64,
    pub pass: bool,
}

/// Recovered witness: the clock-0 block of `P_kernel w` contracted with the
/// initial ancilla state, normalized.
pub fn recovered_witness(v: &ToyVerifier, ham: &ClockHamiltonian, w: &[f64]) -> Result<StateVector> {
    let pw = ham.history_projector() * nalgebra::DVector::from_column_slice(w);
    let nw = 1usize << v.witness();
    let anc = StateVector::basis(v.zero(), 0)?.tensor(&StateVector::plus(v.plus())?)?;
    let mut out = vec![0.0; nw];
    for (a, &amp) in anc.amplitudes().iter().enumerate() {
        if amp != 0.0 {
            for (x, o) in out.iter_mut().enumerate() {
                *o += amp * pw[a * nw + x];
            }
        }
    }
    let norm = out.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm < 1e-12 {
        bail!(Argument, "state has no weight on the history subspace");
    }
    out.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(v.witness(), out)
}

/// Any product `w` with `<w|H~|w> <= alpha C / (T+1)^3` must satisfy
/// `||P_kernel w||^2 >= 1 - alpha`; its recovered witness is checked to be
/// `1 - eps (T+1)` close to a product across P1|P2, `eps = 1 - ||P w||^2`.
pub fn kernel_proximity_check(
    v: &ToyVerifier,
    ham: &ClockHamiltonian,
    states: &[Vec<f64>],
    alpha: f64,
    c_const: f64,
) -> Result<ProximityReport> {
    let cut = Bipartition::blocks(1 << v.proof_qubits(), 1 << v.proof_qubits())?;
    let limit = alpha * c_const / ((ham.t + 1) as f64).powi(3);
    let mut rep = ProximityReport {
        tested: states.len(),
        low_energy: 0,
        min_kernel_weight: 1.0,
        min_witness_overlap: 1.0,
        min_witness_bound: 1.0,
        pass: true,
    };
    for w in states {
        if ham.energy(w) > limit {
            continue;
        }
        rep.low_energy += 1;
        let weight = ham.kernel_weight(w);
        rep.min_kernel_weight = rep.min_kernel_weight.min(weight);
        rep.pass &= weight >= 1.0 - alpha;
        let rec = recovered_witness(v, ham, w)?;
        let overlap = top_schmidt(rec.amplitudes(), &cut);
        let bound = 1.0 - (1.0 - weight).max(0.0) * (ham.t + 1) as f64;
        if overlap < rep.min_witness_overlap {
            rep.min_witness_overlap = overlap;
            rep.min_witness_bound = bound;
        }
        rep.pass &= overlap >= bound - 1e-12;
    }
    Ok(rep)
}

/// Everything the `kitaev` command reports for one toy verifier.
#[derive(Clone, Debug, Serialize)]
pub struct KitaevReport {
    pub format_version: u32,
    pub t: usize,
    pub q: usize,
    pub dim: usize,
    pub c: f64,
    pub s: f64,
    pub alpha: String,
    pub delta_over_c: String,
    pub c_const: f64,
    pub delta: f64,
    pub lambda_min: f64,
    pub lambda_2: f64,
    pub kernel_dim: usize,
    pub c_t: f64,
    pub min_eigenvalues: [f64; 3],
    pub census: SparsityCensus,
    pub sweep: Vec<SweepPoint>,
    pub honest_witness: Option<Vec<f64>>,
    pub completeness: Option<CompletenessReport>,
    pub soundness: Option<SoundnessReport>,
    pub checks: Vec<(String, bool)>,
    pub pass: bool,
}

/// Best honest proof `psi` (largest acceptance of `psi ⊗ psi`) over the
/// proof family.
pub fn best_honest_proof(v: &ToyVerifier, seed: u64) -> Result<(StateVector, f64)> {
    let mut best: Option<(StateVector, f64)> = None;
    for psi in proof_family(v.proof_qubits(), seed)? {
        let acc = v.acceptance(&v.honest_witness(&psi)?)?;
        if best.as_ref().is_none_or(|(_, b)| acc > *b + 1e-15) {
            best = Some((psi, acc));
        }
    }
    Ok(best.expect("family is non-empty"))
}

/// Builds the instance at `delta` (default: the hardness value with the
/// swept constant) and runs every applicable check. The yes-case runs when
/// the best honest proof reaches `c`, the no-case when no product witness
/// exceeds `s`.
pub fn analyze(v: &ToyVerifier, c: &BigRational, s: &BigRational, delta: Option<f64>, seed: u64) -> Result<KitaevReport> {
    let params = hardness_params(c, s, v.steps())?;
    let sweep = c_t_sweep()?;
    let c_const = sweep.iter().map(|p| p.c_t).fold(f64::INFINITY, f64::min);
    let delta = delta.unwrap_or(c_const * to_f64(&params.delta_over_c));
    let ham = build_kitaev(v, delta)?;
    let (cf, sf) = (to_f64(c), to_f64(s));
    let census = sparsity_census(v, &ham.total());
    let mut checks = vec![
        ("lambda_min_zero".to_string(), ham.gap.lambda_min.abs() <= 1e-10),
        ("kernel_dimension".to_string(), ham.gap.kernel_dim == 1 << v.witness()),
        ("stoquastic".to_string(), census.stoquastic),
        ("sparse".to_string(), census.max_row_nnz <= census.bound),
        ("delta_below_gap".to_string(), ham.delta <= ham.gap.lambda_2 / 10.0),
    ];
    let (mut honest_witness, mut completeness, mut soundness) = (None, None, None);
    if v.has_swap_prefix() {
        let (psi, acc) = best_honest_proof(v, seed)?;
        let id = energy_identity(v, &ham, &v.honest_witness(&psi)?)?;
        checks.push(("energy_identity".into(), id.error <= 1e-10));
        if acc >= cf - 1e-12 {
            let rep = completeness_check(v, &ham, cf, &psi)?;
            checks.push(("completeness".into(), rep.pass));
            completeness = Some(rep);
        }
        honest_witness = Some(psi.amplitudes().to_vec());
        if max_product_acceptance(v, seed)?.value <= sf + 1e-9 {
            let rep = soundness_check(v, &ham, cf, sf, seed)?;
            checks.push(("soundness_one_sided".into(), rep.pass));
            soundness = Some(rep);
        }
    }
    let pass = checks.iter().all(|(_, ok)| *ok);
    Ok(KitaevReport {
        format_version: crate::verifier::REPORT_FORMAT_VERSION,
        t: ham.t,
        q: ham.q,
        dim: ham.dim(),
        c: cf,
        s: sf,
        alpha: params.alpha.to_string(),
        delta_over_c: params.delta_over_c.to_string(),
        c_const,
        delta,
        lambda_min: ham.gap.lambda_min,
        lambda_2: ham.gap.lambda_2,
        kernel_dim: ham.gap.kernel_dim,
        c_t: ham.gap.c_t,
        min_eigenvalues: ham.min_eigenvalues,
        census,
        sweep,
        honest_witness,
        completeness,
        soundness,
        checks,
        pass,
    })
}
