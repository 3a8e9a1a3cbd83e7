//! Clock construction `H~ = H_init + H_prop + delta H_out` for toy verifiers,
//! with an explicit `(T+1)`-level clock. Basis index is `t * 2^q + x` for
//! clock value `t` and system basis state `x`.

mod checks;
mod toy;

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num::rational::BigRational;
use num::{One, Zero};
use serde::Serialize;

use crate::error::{bail, Result};
use crate::oracle::{exact_spectrum, MAX_DENSE_DIM};
use crate::statevector::{StateVector, Target};

pub use checks::*;
pub use toy::{no_toy, sweep_toy, trivial_toy, yes_toy, ToyVerifier, MAX_STEPS};

/// Eigenvalues at or below this count as kernel.
pub const KERNEL_TOL: f64 = 1e-8;
const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct SpectralGap {
    pub lambda_min: f64,
    /// Smallest eigenvalue above the kernel.
    pub lambda_2: f64,
    pub kernel_dim: usize,
    /// `lambda_2 * (T+1)^3`.
    pub c_t: f64,
}

#[derive(Clone, Debug)]
pub struct ClockHamiltonian {
    pub t: usize,
    pub q: usize,
    pub delta: f64,
    pub h_init: DMatrix<f64>,
    pub h_prop: DMatrix<f64>,
    pub h_out: DMatrix<f64>,
    pub gap: SpectralGap,
    /// Orthonormal kernel basis of `H_init + H_prop`, one column per vector.
    pub kernel: DMatrix<f64>,
    /// Smallest eigenvalues of `H_init`, `H_prop`, `H_out`.
    pub min_eigenvalues: [f64; 3],
}

impl ClockHamiltonian {
    pub fn dim(&self) -> usize {
        self.h_init.nrows()
    }

    pub fn clean(&self) -> DMatrix<f64> {
        &self.h_init + &self.h_prop
    }

    pub fn total(&self) -> DMatrix<f64> {
        &self.h_init + &self.h_prop + &self.h_out * self.delta
    }

    pub fn energy(&self, v: &[f64]) -> f64 {
        let v = DVector::from_column_slice(v);
        v.dot(&(self.total() * &v))
    }

    pub fn clean_energy(&self, v: &[f64]) -> f64 {
        let v = DVector::from_column_slice(v);
        v.dot(&(self.clean() * &v))
    }

    /// Orthogonal projector onto the history subspace.
    pub fn history_projector(&self) -> DMatrix<f64> {
        &self.kernel * self.kernel.transpose()
    }

    /// `||P_kernel v||^2`.
    pub fn kernel_weight(&self, v: &[f64]) -> f64 {
        (self.kernel.transpose() * DVector::from_column_slice(v)).norm_squared()
    }
}

/// Penalty terms acting at clock 0: `|1><1|` on each zero ancilla and
/// `|-><-|` on each plus ancilla.
pub fn h_init(v: &ToyVerifier) -> DMatrix<f64> {
    let (q, t) = (v.qubits(), v.steps());
    let dsys = 1usize << q;
    let mut h = DMatrix::zeros((t + 1) * dsys, (t + 1) * dsys);
    for x in 0..dsys {
        for w in 0..v.zero() {
            if x >> (q - 1 - w) & 1 == 1 {
                h[(x, x)] += 1.0;
            }
        }
        for w in v.zero()..v.ancillas() {
            let y = x ^ (1 << (q - 1 - w));
            h[(x, x)] += 0.5;
            h[(x, y)] -= 0.5;
        }
    }
    h
}

/// `sum_t 1/2 (|t><t| + |t-1><t-1|) ⊗ I - 1/2 |t><t-1| ⊗ U_t - 1/2 |t-1><t| ⊗ U_t^T`.
pub fn h_prop(v: &ToyVerifier) -> DMatrix<f64> {
    let (q, t) = (v.qubits(), v.steps());
    let dsys = 1usize << q;
    let mut h = DMatrix::zeros((t + 1) * dsys, (t + 1) * dsys);
    for s in 1..=t {
        let perm = v.step_permutation(s);
        for (x, &y) in perm.iter().enumerate() {
            let (a, b) = ((s - 1) * dsys + x, s * dsys + y);
            h[(a, a)] += 0.5;
            h[(b, b)] += 0.5;
            h[(a, b)] -= 0.5;
            h[(b, a)] -= 0.5;
        }
    }
    h
}

/// `|T><T| ⊗ (I - Pi_acc)`.
pub fn h_out(v: &ToyVerifier) -> DMatrix<f64> {
    let (q, t) = (v.qubits(), v.steps());
    let dsys = 1usize << q;
    let mut h = DMatrix::zeros((t + 1) * dsys, (t + 1) * dsys);
    let off = t * dsys;
    for y in 0..dsys {
        let mut col = vec![0.0; dsys];
        col[y] = 1.0;
        v.accept().apply_dense(q, &mut col);
        for (x, p) in col.into_iter().enumerate() {
            h[(off + x, off + y)] = if x == y { 1.0 - p } else { -p };
        }
    }
    h
}

fn min_eigenvalue(h: &DMatrix<f64>) -> f64 {
    nalgebra::SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `(lambda_min, lambda_2)` of `H_init + H_prop` with the kernel basis.
pub fn spectral_gap(clean: &DMatrix<f64>, t: usize) -> Result<(SpectralGap, DMatrix<f64>)> {
    let spectrum = exact_spectrum(clean)?;
    let kernel_dim = spectrum.eigenvalues.iter().take_while(|&&l| l <= KERNEL_TOL).count();
    let Some(&lambda_2) = spectrum.eigenvalues.get(kernel_dim) else {
        bail!(Invariant, "no eigenvalue above the kernel");
    };
    let kernel = spectrum.eigenvectors.columns(0, kernel_dim).into_owned();
    let c_t = lambda_2 * ((t + 1) as f64).powi(3);
    Ok((SpectralGap { lambda_min: spectrum.eigenvalues[0], lambda_2, kernel_dim, c_t }, kernel))
}

/// Builds the clock Hamiltonian and checks its structural invariants: each
/// part positive semidefinite, `lambda_min(H_init + H_prop) = 0` with kernel
/// dimension `2^witness`, and `0 < delta <= lambda_2 / 10`.
pub fn build_kitaev(v: &ToyVerifier, delta: f64) -> Result<ClockHamiltonian> {
    let (q, t) = (v.qubits(), v.steps());
    let dim = (t + 1) << q;
    if q >= usize::BITS as usize || dim > MAX_DENSE_DIM {
        bail!(Resource, "clock Hamiltonian dimension {dim} exceeds the dense cap {MAX_DENSE_DIM}");
    }
    if !(delta > 0.0 && delta.is_finite()) {
        bail!(Argument, "delta must be positive, got {delta}");
    }
    let (hi, hp, ho) = (h_init(v), h_prop(v), h_out(v));
    let mins = [min_eigenvalue(&hi), min_eigenvalue(&hp), min_eigenvalue(&ho)];
    for (name, m) in ["H_init", "H_prop", "H_out"].iter().zip(mins) {
        if m < -PSD_TOL {
            bail!(Invariant, "{name} has eigenvalue {m} < 0");
        }
    }
    let (gap, kernel) = spectral_gap(&(&hi + &hp), t)?;
    if gap.lambda_min.abs() > PSD_TOL {
        bail!(Invariant, "lambda_min(H_init + H_prop) = {} is not zero", gap.lambda_min);
    }
    if gap.kernel_dim != 1 << v.witness() {
        bail!(Invariant, "kernel dimension {} differs from 2^{}", gap.kernel_dim, v.witness());
    }
    if delta > gap.lambda_2 / 10.0 {
        bail!(Argument, "delta = {delta} exceeds lambda_2 / 10 = {}", gap.lambda_2 / 10.0);
    }
    Ok(ClockHamiltonian { t, q, delta, h_init: hi, h_prop: hp, h_out: ho, gap, kernel, min_eigenvalues: mins })
}

/// `(T+1)^{-1/2} sum_t |t> ⊗ U_t ... U_1 |0^m, +^p, psi>`.
pub fn history_state(v: &ToyVerifier, witness: &StateVector) -> Result<Vec<f64>> {
    let traj = v.trajectory(witness)?;
    let norm = (traj.len() as f64).sqrt().recip();
    Ok(traj.iter().flat_map(|s| s.amplitudes().iter().map(move |a| a * norm)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct SparsityCensus {
    pub stoquastic: bool,
    pub max_row_nnz: usize,
    /// `3 + plus + 2^(plus targets)`: diagonal, two clock neighbours, one
    /// `H_init` flip per plus ancilla and the support of `Pi_acc`.
    pub bound: usize,
}

pub fn sparsity_census(v: &ToyVerifier, h: &DMatrix<f64>) -> SparsityCensus {
    let n = h.nrows();
    let stoquastic = (0..n).all(|i| (0..n).all(|j| i == j || h[(i, j)] <= 0.0));
    let max_row_nnz = (0..n).map(|i| (0..n).filter(|&j| h[(i, j)] != 0.0).count()).max().unwrap_or(0);
    let plus_targets = v.accept().targets.iter().filter(|t| t.target == Target::Plus).count();
    SparsityCensus { stoquastic, max_row_nnz, bound: 3 + v.plus() + (1 << plus_targets) }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HardnessParams {
    pub alpha: BigRational,
    /// `delta / C`.
    pub delta_over_c: BigRational,
}

/// `alpha = (c-s)^2 / (1024 (T+1)^2)` and
/// `delta = C alpha / ((1 - c + (c-s)/4) (T+1)^2)`.
pub fn hardness_params(c: &BigRational, s: &BigRational, t: usize) -> Result<HardnessParams> {
    let half = BigRational::new(1.into(), 2.into());
    if *s < half || c > &BigRational::one() {
        bail!(Argument, "need 1/2 <= s < c <= 1");
    }
    if c <= s {
        bail!(Argument, "need s < c");
    }
    if t == 0 {
        bail!(Argument, "need T >= 1");
    }
    let t1 = BigRational::from_integer((t as i64 + 1).into());
    let t1sq = &t1 * &t1;
    let gap = c - s;
    let alpha = &gap * &gap / (BigRational::from_integer(1024.into()) * &t1sq);
    let denom = (BigRational::one() - c + &gap / BigRational::from_integer(4.into())) * &t1sq;
    debug_assert!(!denom.is_zero());
    let delta_over_c = &alpha / denom;
    Ok(HardnessParams { alpha, delta_over_c })
}

/// Nonzero entries as `row col value` lines.
pub fn write_coordinate_list<W: Write>(h: &DMatrix<f64>, mut out: W) -> Result<()> {
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            let v = h[(i, j)];
            if v != 0.0 {
                writeln!(out, "{i} {j} {v}")?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
