use super::gate::{mask, scatter_xor, Gate};
use super::projector::ProjectorSpec;
use super::state::StateVector;
use crate::error::{bail, Result};

/// Sparse real state on up to 128 qubits, stored as distinct `(index,
/// amplitude)` pairs. Permutation gates only relabel indices, so the support
/// size never changes.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    qubits: usize,
    entries: Vec<(u128, f64)>,
}

impl SparseState {
    pub fn from_entries(qubits: usize, mut entries: Vec<(u128, f64)>) -> Result<Self> {
        if qubits > 128 {
            bail!(Resource, "sparse states support at most 128 qubits");
        }
        entries.retain(|e| e.1 != 0.0);
        entries.sort_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                bail!(Argument, "duplicate basis index {}", w[0].0);
            }
        }
        if let Some(e) = entries.iter().find(|e| qubits < 128 && e.0 >> qubits != 0) {
            bail!(Argument, "basis index {} out of range for {qubits} qubits", e.0);
        }
        Ok(Self { qubits, entries })
    }

    pub fn basis(qubits: usize, index: u128) -> Result<Self> {
        Self::from_entries(qubits, vec![(index, 1.0)])
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let idx = bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
        Self::basis(bits.len(), idx)
    }

    pub fn plus(qubits: usize) -> Result<Self> {
        if qubits > 24 {
            bail!(Resource, "|+>^{qubits} has too many terms for a sparse state");
        }
        let dim = 1u128 << qubits;
        let a = (dim as f64).sqrt().recip();
        Self::from_entries(qubits, (0..dim).map(|i| (i, a)).collect())
    }

    pub fn from_dense(state: &StateVector) -> Self {
        Self { qubits: state.qubits(), entries: state.entries() }
    }

    pub fn to_dense(&self) -> Result<StateVector> {
        let mut amps = vec![0.0; 1usize << self.qubits];
        for &(k, a) in &self.entries {
            amps[k as usize] = a;
        }
        StateVector::from_amplitudes(self.qubits, amps)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn entries(&self) -> &[(u128, f64)] {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|e| e.1 * e.1).sum()
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let m = self.qubits + other.qubits;
        if m > 128 {
            bail!(Resource, "sparse states support at most 128 qubits");
        }
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for &(i, a) in &self.entries {
            for &(j, b) in &other.entries {
                entries.push(((i << other.qubits) | j, a * b));
            }
        }
        Ok(Self { qubits: m, entries })
    }

    /// Sets (by XOR) a classical value on `wires`; packed big-endian.
    pub fn xor_value(&mut self, wires: &[usize], value: u128) {
        let m = self.qubits;
        for e in self.entries.iter_mut() {
            e.0 = scatter_xor(e.0, m, wires, value);
        }
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.qubits)?;
        let m = self.qubits;
        for e in self.entries.iter_mut() {
            e.0 = gate.map_index(e.0, m);
        }
        Ok(())
    }

    pub fn run(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            g.validate(self.qubits)?;
        }
        let m = self.qubits;
        for e in self.entries.iter_mut() {
            e.0 = gates.iter().fold(e.0, |k, g| g.map_index(k, m));
        }
        Ok(())
    }

    pub fn acceptance_probability(&self, proj: &ProjectorSpec) -> Result<f64> {
        proj.validate_for(self.qubits)?;
        Ok(proj.probability_sparse(self.qubits, &self.entries))
    }
}

/// One equivalence class of values of a read-only register.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegisterClass {
    pub value: u128,
    pub weight: f64,
}

/// Acceptance probability when `register` starts in a uniform superposition,
/// the circuit returns it to its initial value on every branch, and the
/// projector does not touch it. Such a register behaves as a classical random
/// variable, so the probability is the weighted mean over `classes` of the run
/// with the register set to the class representative. `base` must hold the
/// register at zero. Restoration is checked on the simulated support.
pub fn acceptance_over_register(
    base: &SparseState,
    gates: &[Gate],
    register: &[usize],
    classes: &[RegisterClass],
    proj: &ProjectorSpec,
) -> Result<f64> {
    let m = base.qubits();
    if let Some(t) = proj.targets.iter().find(|t| register.contains(&t.wire)) {
        bail!(Invariant, "projector touches register wire {}", t.wire);
    }
    let reg_mask = register.iter().fold(0u128, |acc, &w| acc | mask(m, w));
    if base.entries().iter().any(|e| e.0 & reg_mask != 0) {
        bail!(Argument, "register must start at zero in the base state");
    }
    let total: f64 = classes.iter().map(|c| c.weight).sum();
    if (total - 1.0).abs() > 1e-12 {
        bail!(Argument, "register class weights sum to {total}, expected 1");
    }
    let mut acc = 0.0;
    for class in classes {
        if class.weight == 0.0 {
            continue;
        }
        let mut s = base.clone();
        s.xor_value(register, class.value);
        s.run(gates)?;
        let restored = scatter_xor(0, m, register, class.value);
        if s.entries().iter().any(|e| e.0 & reg_mask != restored) {
            bail!(Invariant, "circuit does not restore the register for value {}", class.value);
        }
        acc += class.weight * s.acceptance_probability(proj)?;
    }
    Ok(acc)
}
