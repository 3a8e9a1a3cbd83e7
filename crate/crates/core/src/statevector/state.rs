use serde::{Deserialize, Serialize};

use super::gate::Gate;
use super::projector::ProjectorSpec;
use crate::error::{bail, Result};

pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Dense-simulation qubit cap; `STOQVERIF_MAX_QUBITS` overrides the default.
pub fn qubit_cap() -> usize {
    std::env::var("STOQVERIF_MAX_QUBITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_QUBIT_CAP)
}

fn check_cap(qubits: usize) -> Result<()> {
    let cap = qubit_cap();
    if qubits > cap {
        bail!(Resource, "{qubits} qubits exceeds the dense simulation cap of {cap}");
    }
    Ok(())
}

/// Dense real state vector, wire 0 is the most significant index bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<f64>,
}

impl StateVector {
    pub fn basis(qubits: usize, index: u128) -> Result<Self> {
        check_cap(qubits)?;
        let dim = 1usize << qubits;
        if index >= dim as u128 {
            bail!(Argument, "basis index {index} out of range for {qubits} qubits");
        }
        let mut amps = vec![0.0; dim];
        amps[index as usize] = 1.0;
        Ok(Self { qubits, amps })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let idx = bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
        Self::basis(bits.len(), idx)
    }

    /// Requires unit norm to within `1e-9`.
    pub fn from_amplitudes(qubits: usize, amps: Vec<f64>) -> Result<Self> {
        check_cap(qubits)?;
        if amps.len() != 1usize << qubits {
            bail!(Argument, "expected {} amplitudes for {qubits} qubits, got {}", 1usize << qubits, amps.len());
        }
        if amps.iter().any(|a| !a.is_finite()) {
            bail!(Argument, "amplitudes must be finite");
        }
        let norm: f64 = amps.iter().map(|a| a * a).sum();
        if (norm - 1.0).abs() > 1e-9 {
            bail!(Argument, "state is not normalized (norm^2 = {norm})");
        }
        Ok(Self { qubits, amps })
    }

    /// `|+>^{qubits}`.
    pub fn plus(qubits: usize) -> Result<Self> {
        check_cap(qubits)?;
        let dim = 1usize << qubits;
        Ok(Self { qubits, amps: vec![(dim as f64).sqrt().recip(); dim] })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    pub fn inner(&self, other: &Self) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum()
    }

    /// `self ⊗ other`, with `self` on the leading wires.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_cap(self.qubits + other.qubits)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &a in &self.amps {
            amps.extend(other.amps.iter().map(|&b| a * b));
        }
        Ok(Self { qubits: self.qubits + other.qubits, amps })
    }

    /// Non-zero entries as `(index, amplitude)` pairs.
    pub fn entries(&self) -> Vec<(u128, f64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .map(|(i, &a)| (i as u128, a))
            .collect()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    // All supported gates are involutive permutations of the basis, so the
    // update can be done with pairwise swaps.
    fn apply_unchecked(&mut self, gate: &Gate) {
        let m = self.qubits;
        for i in 0..self.amps.len() {
            let j = gate.map_index(i as u128, m) as usize;
            if j > i {
                self.amps.swap(i, j);
            }
        }
    }

    pub fn run(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            g.validate(self.qubits)?;
        }
        for g in gates {
            self.apply_unchecked(g);
        }
        Ok(())
    }

    /// `||P psi||^2`.
    pub fn acceptance_probability(&self, proj: &ProjectorSpec) -> Result<f64> {
        proj.validate_for(self.qubits)?;
        let mut amps = self.amps.clone();
        proj.apply_dense(self.qubits, &mut amps);
        Ok(amps.iter().map(|a| a * a).sum())
    }
}

/// Builds `|x> ⊗ |witness> ⊗ |0^zero> ⊗ |+^plus>`.
pub fn prepare_input(x: &[bool], witness: &StateVector, zero: usize, plus: usize) -> Result<StateVector> {
    let total = x.len() + witness.qubits() + zero + plus;
    check_cap(total)?;
    let zeros = StateVector::basis(zero, 0)?;
    StateVector::from_bits(x)?.tensor(witness)?.tensor(&zeros)?.tensor(&StateVector::plus(plus)?)
}

/// JSON witness file: `{"n": qubits, "amplitudes": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub n: usize,
    pub amplitudes: Vec<f64>,
}

impl WitnessFile {
    pub fn from_state(s: &StateVector) -> Self {
        Self { n: s.qubits(), amplitudes: s.amplitudes().to_vec() }
    }

    /// Checks length and normalization.
    pub fn into_state(self) -> Result<StateVector> {
        StateVector::from_amplitudes(self.n, self.amplitudes)
    }

    pub fn parse(text: &str) -> Result<StateVector> {
        serde_json::from_str::<Self>(text)?.into_state()
    }
}
