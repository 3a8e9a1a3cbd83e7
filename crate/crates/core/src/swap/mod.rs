//! SWAP test and the compilation of multi-qubit projective verifiers into
//! single-qubit ones.

mod compile;
mod density;

use nalgebra::DMatrix;

pub use compile::{compile_generalized, route_to_front, transport_thresholds, GeneralizedVerifier, StandardVerifier};
pub use density::{partial_trace, partial_trace_density, pure_density, validate_density, DensityState};

use crate::error::{bail, Result};
use crate::statevector::{Gate, ProjectorSpec, ProjectorTarget, Target};

/// `(1 + Tr(rho sigma)) / 2`.
pub fn swap_test_accept(rho: &DMatrix<f64>, sigma: &DMatrix<f64>) -> Result<f64> {
    validate_density(rho)?;
    validate_density(sigma)?;
    if rho.shape() != sigma.shape() {
        bail!(Argument, "dimension mismatch: {:?} vs {:?}", rho.shape(), sigma.shape());
    }
    Ok(0.5 * (1.0 + rho.component_mul(&sigma.transpose()).sum()))
}

/// Controlled-SWAP gates for a SWAP test between `a[i]` and `b[i]`.
pub fn swap_test_gates(control: usize, a: &[usize], b: &[usize]) -> Vec<Gate> {
    a.iter().zip(b).map(|(&x, &y)| Gate::fredkin(control, x, y)).collect()
}

/// SWAP-test acceptance by density-matrix simulation of the circuit
/// `|+><+| ⊗ rho ⊗ sigma`, controlled-SWAPs, `|+>` projection of the control.
pub fn swap_test_circuit_accept(rho: &DMatrix<f64>, sigma: &DMatrix<f64>) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        bail!(Argument, "dimension mismatch: {:?} vs {:?}", rho.shape(), sigma.shape());
    }
    let n = rho.nrows().trailing_zeros() as usize;
    let plus = DMatrix::from_element(2, 2, 0.5);
    let mut state = DensityState::new(plus)?
        .tensor(&DensityState::new(rho.clone())?)?
        .tensor(&DensityState::new(sigma.clone())?)?;
    let a: Vec<usize> = (1..=n).collect();
    let b: Vec<usize> = (n + 1..=2 * n).collect();
    for g in swap_test_gates(0, &a, &b) {
        for e in g.elementary() {
            state.apply(&e)?;
        }
    }
    state.acceptance_probability(&ProjectorSpec::new(vec![ProjectorTarget { wire: 0, target: Target::Plus }])?)
}

#[cfg(test)]
mod tests;
