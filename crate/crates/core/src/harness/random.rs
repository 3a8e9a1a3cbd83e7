use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::statevector::{CircuitSpec, Gate, ProjectorSpec, ProjectorTarget, StateVector, Target, WireLayout};
use crate::swap::GeneralizedVerifier;

/// Haar-like random real unit vector (Gaussian entries, normalized); with
/// `signed = false` the absolute values are taken.
pub fn random_unit_vector<R: Rng>(dim: usize, signed: bool, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim)
        .map(|_| {
            let g: f64 = rng.sample(StandardNormal);
            if signed { g } else { g.abs() }
        })
        .collect();
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

pub fn random_state<R: Rng>(qubits: usize, signed: bool, rng: &mut R) -> Result<StateVector> {
    StateVector::from_amplitudes(qubits, random_unit_vector(1 << qubits, signed, rng))
}

/// Random real density matrix of rank `rank` (clamped to the dimension).
pub fn random_density<R: Rng>(qubits: usize, rank: usize, rng: &mut R) -> DMatrix<f64> {
    let dim = 1usize << qubits;
    let rank = rank.clamp(1, dim);
    let a = DMatrix::<f64>::from_fn(dim, rank, |_, _| rng.sample(StandardNormal));
    let rho = &a * a.transpose();
    let t = rho.trace();
    rho / t
}

/// Random X/CNOT/Toffoli gate on `qubits >= 3` wires.
pub fn random_gate<R: Rng>(qubits: usize, rng: &mut R) -> Gate {
    let mut wires: Vec<usize> = (0..qubits).collect();
    wires.shuffle(rng);
    match rng.random_range(0..3) {
        0 => Gate::X(wires[0]),
        1 => Gate::cnot(wires[0], wires[1]),
        _ => Gate::toffoli(wires[0], wires[1], wires[2]),
    }
}

/// Random multi-qubit verifier on at most 8 wires with 1–3 measured wires, and
/// a random input string for it.
pub fn random_generalized_verifier<R: Rng>(rng: &mut R) -> Result<(GeneralizedVerifier, Vec<bool>)> {
    let layout = WireLayout {
        input: rng.random_range(0..=2),
        witness: rng.random_range(1..=3),
        zero: rng.random_range(0..=2),
        plus: rng.random_range(1..=2),
    };
    let m = layout.total().max(3);
    let layout = WireLayout { zero: layout.zero + (m - layout.total()), ..layout };
    let gates = (0..rng.random_range(0..=20)).map(|_| random_gate(m, rng)).collect();
    let mut wires: Vec<usize> = (0..m).collect();
    wires.shuffle(rng);
    let count = rng.random_range(1..=3);
    let targets = wires[..count]
        .iter()
        .enumerate()
        .map(|(i, &wire)| {
            let target = if i == 0 {
                Target::Plus
            } else {
                [Target::Plus, Target::Zero, Target::One][rng.random_range(0..3)]
            };
            ProjectorTarget { wire, target }
        })
        .collect();
    let x = (0..layout.input).map(|_| rng.random_bool(0.5)).collect();
    Ok((GeneralizedVerifier::new(CircuitSpec::new(layout, gates)?, ProjectorSpec::new(targets)?)?, x))
}
