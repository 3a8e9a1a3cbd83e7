//! Reversible `flag ^= [y < k]` for an `ell`-bit `y` and an `(ell+1)`-bit
//! `k` (so that `k = 2^ell` fits). Registers are big-endian.

use super::gate::{Gate, OracleGate};
use crate::error::{bail, Result};

/// Wire assignment for one comparator instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparatorWires {
    pub y: Vec<usize>,
    pub k: Vec<usize>,
    pub flag: usize,
    /// `ell + 1` borrow ancillas, zero before and after.
    pub work: Vec<usize>,
}

impl ComparatorWires {
    /// Compact layout: y, k, flag, work.
    pub fn compact(ell: usize) -> Self {
        let y: Vec<usize> = (0..ell).collect();
        let k: Vec<usize> = (ell..2 * ell + 1).collect();
        let flag = 2 * ell + 1;
        let work = (2 * ell + 2..3 * ell + 3).collect();
        Self { y, k, flag, work }
    }

    pub fn ell(&self) -> usize {
        self.y.len()
    }

    pub fn qubits(&self) -> usize {
        self.y.len() + self.k.len() + 1 + self.work.len()
    }

    fn check(&self) -> Result<()> {
        let ell = self.y.len();
        if ell == 0 || self.k.len() != ell + 1 {
            bail!(Argument, "comparator needs ell >= 1 and |k| = ell+1");
        }
        Ok(())
    }
}

/// Gate-level comparator: ripple-borrow compute, copy the final borrow into
/// the flag, then uncompute so the work wires return to zero.
pub fn comparator_gates(w: &ComparatorWires) -> Result<Vec<Gate>> {
    w.check()?;
    if w.work.len() != w.ell() + 1 {
        bail!(Argument, "gate-level comparator needs ell+1 work wires");
    }
    let ell = w.ell();
    // bit i counted from the least significant end
    let y = |i: usize| w.y[ell - 1 - i];
    let k = |i: usize| w.k[ell - i];
    // borrow into bit i lives on work[i - 1]
    let b = |i: usize| w.work[i - 1];
    let mut compute = Vec::with_capacity(6 * ell + 4);
    for i in 0..ell {
        compute.push(Gate::X(y(i)));
        compute.push(Gate::toffoli(y(i), k(i), b(i + 1)));
        if i > 0 {
            compute.push(Gate::cnot(k(i), y(i)));
            compute.push(Gate::toffoli(y(i), b(i), b(i + 1)));
            compute.push(Gate::cnot(k(i), y(i)));
        }
        compute.push(Gate::X(y(i)));
    }
    // top bit of k has no y partner
    compute.push(Gate::cnot(k(ell), b(ell + 1)));
    compute.push(Gate::X(k(ell)));
    compute.push(Gate::toffoli(k(ell), b(ell), b(ell + 1)));
    compute.push(Gate::X(k(ell)));

    let mut gates = compute.clone();
    gates.push(Gate::cnot(b(ell + 1), w.flag));
    gates.extend(compute.into_iter().rev());
    Ok(gates)
}

/// Single-oracle version of [`comparator_gates`] (work wires unused).
pub fn comparator_oracle(w: &ComparatorWires) -> Result<Gate> {
    w.check()?;
    let ell = w.ell();
    let inputs: Vec<usize> = w.y.iter().chain(&w.k).copied().collect();
    let kmask = (1u128 << (ell + 1)) - 1;
    Ok(Gate::Oracle(OracleGate::new("lt", inputs, vec![w.flag], move |v| {
        let y = v >> (ell + 1);
        let k = v & kmask;
        (y < k) as u128
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(gates: &[Gate], m: usize, idx: u128) -> u128 {
        gates.iter().fold(idx, |i, g| g.map_index(i, m))
    }

    #[test]
    fn exhaustive_small_widths() {
        for ell in 1..=4usize {
            let w = ComparatorWires::compact(ell);
            let m = w.qubits();
            let gates = comparator_gates(&w).unwrap();
            let oracle = comparator_oracle(&w).unwrap();
            assert!(gates.iter().all(Gate::is_elementary));
            for y in 0..(1u128 << ell) {
                for k in 0..=(1u128 << ell) {
                    for flag in 0..2u128 {
                        let idx = (y << (ell + 1 + 1 + ell + 1)) | (k << (1 + ell + 1)) | (flag << (ell + 1));
                        let out = run(&gates, m, idx);
                        let want = idx ^ (((y < k) as u128) << (ell + 1));
                        assert_eq!(out, want, "ell={ell} y={y} k={k} flag={flag}");
                        assert_eq!(oracle.map_index(idx, m), want);
                    }
                }
            }
        }
    }

    #[test]
    fn gate_count_is_linear() {
        let w = ComparatorWires::compact(16);
        assert!(comparator_gates(&w).unwrap().len() <= 2 * (6 * 16 + 4) + 1);
    }
}
