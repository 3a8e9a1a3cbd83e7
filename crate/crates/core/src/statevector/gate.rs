use std::fmt;
use std::sync::Arc;

use crate::error::{bail, Result};

/// A classical function evaluated by an [`OracleGate`]. Inputs and outputs are
/// packed big-endian in the order of the gate's wire lists.
pub trait ClassicalFunction: Send + Sync {
    fn eval(&self, input: u128) -> u128;
}

impl<F> ClassicalFunction for F
where
    F: Fn(u128) -> u128 + Send + Sync,
{
    fn eval(&self, input: u128) -> u128 {
        self(input)
    }
}

/// XOR-write oracle `|in>|out> -> |in>|out ^ f(in)>`, a bijection on basis
/// states for any `f`.
#[derive(Clone)]
pub struct OracleGate {
    pub name: String,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub function: Arc<dyn ClassicalFunction>,
}

impl OracleGate {
    pub fn new<F>(name: impl Into<String>, inputs: Vec<usize>, outputs: Vec<usize>, f: F) -> Self
    where
        F: Fn(u128) -> u128 + Send + Sync + 'static,
    {
        Self { name: name.into(), inputs, outputs, function: Arc::new(f) }
    }
}

impl fmt::Debug for OracleGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleGate")
            .field("name", &self.name)
            .field("inputs", &self.inputs)
            .field("outputs", &self.outputs)
            .finish()
    }
}

impl PartialEq for OracleGate {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.inputs == other.inputs && self.outputs == other.outputs
    }
}

/// Classical reversible gates. `Swap` and `Fredkin` are permutation
/// shortcuts; [`Gate::elementary`] expands them into CNOT/Toffoli form.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    X(usize),
    Cnot { control: usize, target: usize },
    Toffoli { c1: usize, c2: usize, target: usize },
    Swap(usize, usize),
    Fredkin { control: usize, a: usize, b: usize },
    Oracle(OracleGate),
}

#[inline]
pub(crate) fn bit(idx: u128, m: usize, wire: usize) -> bool {
    (idx >> (m - 1 - wire)) & 1 == 1
}

#[inline]
pub(crate) fn mask(m: usize, wire: usize) -> u128 {
    1u128 << (m - 1 - wire)
}

/// Packs the bits on `wires` (first wire most significant).
#[inline]
pub(crate) fn gather(idx: u128, m: usize, wires: &[usize]) -> u128 {
    wires.iter().fold(0u128, |acc, &w| (acc << 1) | ((idx >> (m - 1 - w)) & 1))
}

/// XORs `value` (packed like [`gather`]) onto `wires`.
#[inline]
pub(crate) fn scatter_xor(idx: u128, m: usize, wires: &[usize], value: u128) -> u128 {
    let len = wires.len();
    wires.iter().enumerate().fold(idx, |acc, (i, &w)| {
        let b = (value >> (len - 1 - i)) & 1;
        acc ^ (b << (m - 1 - w))
    })
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::Toffoli { c1, c2, target }
    }

    pub fn fredkin(control: usize, a: usize, b: usize) -> Self {
        Gate::Fredkin { control, a, b }
    }

    /// Every wire the gate touches.
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Gate::X(q) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Toffoli { c1, c2, target } => vec![*c1, *c2, *target],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::Fredkin { control, a, b } => vec![*control, *a, *b],
            Gate::Oracle(o) => o.inputs.iter().chain(&o.outputs).copied().collect(),
        }
    }

    /// Wires whose value the gate may change.
    pub fn written_wires(&self) -> Vec<usize> {
        match self {
            Gate::X(q) => vec![*q],
            Gate::Cnot { target, .. } | Gate::Toffoli { target, .. } => vec![*target],
            Gate::Swap(a, b) | Gate::Fredkin { a, b, .. } => vec![*a, *b],
            Gate::Oracle(o) => o.outputs.clone(),
        }
    }

    pub fn validate(&self, qubits: usize) -> Result<()> {
        let wires = self.wires();
        for (i, &w) in wires.iter().enumerate() {
            if w >= qubits {
                bail!(Argument, "{self:?}: wire {w} out of range for {qubits} qubits");
            }
            if wires[..i].contains(&w) {
                bail!(Argument, "{self:?}: wire {w} used twice");
            }
        }
        if let Gate::Oracle(o) = self {
            if o.inputs.len() > 127 || o.outputs.is_empty() {
                bail!(Argument, "oracle {} needs 1..=127 outputs and at most 127 inputs", o.name);
            }
        }
        Ok(())
    }

    /// Image of basis index `idx` on `m` qubits.
    #[inline]
    pub fn map_index(&self, idx: u128, m: usize) -> u128 {
        match self {
            Gate::X(q) => idx ^ mask(m, *q),
            Gate::Cnot { control, target } => {
                if bit(idx, m, *control) {
                    idx ^ mask(m, *target)
                } else {
                    idx
                }
            }
            Gate::Toffoli { c1, c2, target } => {
                if bit(idx, m, *c1) && bit(idx, m, *c2) {
                    idx ^ mask(m, *target)
                } else {
                    idx
                }
            }
            Gate::Swap(a, b) => swap_bits(idx, m, *a, *b),
            Gate::Fredkin { control, a, b } => {
                if bit(idx, m, *control) {
                    swap_bits(idx, m, *a, *b)
                } else {
                    idx
                }
            }
            Gate::Oracle(o) => {
                let input = gather(idx, m, &o.inputs);
                let out_mask = if o.outputs.len() >= 128 { u128::MAX } else { (1u128 << o.outputs.len()) - 1 };
                scatter_xor(idx, m, &o.outputs, o.function.eval(input) & out_mask)
            }
        }
    }

    /// Expansion into X/CNOT/Toffoli (oracles are left as they are).
    pub fn elementary(&self) -> Vec<Gate> {
        match *self {
            Gate::Swap(a, b) => vec![Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)],
            Gate::Fredkin { control, a, b } => {
                vec![Gate::cnot(b, a), Gate::toffoli(control, a, b), Gate::cnot(b, a)]
            }
            _ => vec![self.clone()],
        }
    }

    pub fn is_elementary(&self) -> bool {
        matches!(self, Gate::X(_) | Gate::Cnot { .. } | Gate::Toffoli { .. })
    }

    /// The same gate with every wire passed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::X(q) => Gate::X(f(*q)),
            Gate::Cnot { control, target } => Gate::cnot(f(*control), f(*target)),
            Gate::Toffoli { c1, c2, target } => Gate::toffoli(f(*c1), f(*c2), f(*target)),
            Gate::Swap(a, b) => Gate::Swap(f(*a), f(*b)),
            Gate::Fredkin { control, a, b } => Gate::fredkin(f(*control), f(*a), f(*b)),
            Gate::Oracle(o) => Gate::Oracle(OracleGate {
                name: o.name.clone(),
                inputs: o.inputs.iter().map(|&w| f(w)).collect(),
                outputs: o.outputs.iter().map(|&w| f(w)).collect(),
                function: Arc::clone(&o.function),
            }),
        }
    }
}

#[inline]
fn swap_bits(idx: u128, m: usize, a: usize, b: usize) -> u128 {
    if bit(idx, m, a) != bit(idx, m, b) {
        idx ^ mask(m, a) ^ mask(m, b)
    } else {
        idx
    }
}

pub fn expand_elementary(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().flat_map(Gate::elementary).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fredkin_expansion_matches_permutation() {
        let g = Gate::fredkin(0, 1, 2);
        for idx in 0..8u128 {
            let direct = g.map_index(idx, 3);
            let expanded = g.elementary().iter().fold(idx, |i, e| e.map_index(i, 3));
            assert_eq!(direct, expanded, "idx {idx}");
        }
    }

    #[test]
    fn swap_is_three_cnots() {
        let g = Gate::Swap(0, 2);
        assert_eq!(g.elementary().len(), 3);
        for idx in 0..8u128 {
            assert_eq!(g.map_index(idx, 3), g.elementary().iter().fold(idx, |i, e| e.map_index(i, 3)));
        }
    }

    #[test]
    fn oracle_xor_writes_packed_output() {
        let g = Gate::Oracle(OracleGate::new("inc", vec![0, 1], vec![2, 3], |v| v + 1));
        // |01>|00> -> |01>|10>
        assert_eq!(g.map_index(0b0100, 4), 0b0110);
        assert_eq!(g.map_index(0b0110, 4), 0b0100);
    }

    #[test]
    fn validate_rejects_repeated_wires() {
        assert!(Gate::cnot(1, 1).validate(3).is_err());
        assert!(Gate::X(3).validate(3).is_err());
        assert!(Gate::toffoli(0, 1, 2).validate(3).is_ok());
    }
}
