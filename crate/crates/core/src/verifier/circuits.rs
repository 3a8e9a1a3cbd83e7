use std::sync::Arc;

use crate::error::{bail, Result};
use crate::hamiltonian::{term_oracle, OneSparseTerm};
use crate::statevector::{
    comparator_gates, comparator_oracle, CircuitSpec, ComparatorWires, Gate, OracleGate, ProjectorSpec,
    ProjectorTarget, Target, WireLayout,
};

/// How the `[y < k]` comparison is realized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// One permutation oracle.
    #[default]
    Fast,
    /// Ripple-borrow X/CNOT/Toffoli circuit with uncomputed work wires.
    GateLevel,
}

/// Which half of the combined verifier a circuit implements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Procedure {
    V1,
    V2,
}

/// Circuit for a single one-sparse term together with its acceptance
/// projector. `y` is the uniform comparison register: it starts in `|+>^ell`
/// and is never written, which the simulator exploits.
#[derive(Clone, Debug)]
pub struct TermCircuit {
    pub procedure: Procedure,
    pub circuit: CircuitSpec,
    pub projector: ProjectorSpec,
    pub y: Vec<usize>,
    /// Plus-ancilla wires other than `y`, which always come first.
    pub controls: Vec<usize>,
}

/// The `|c_x>` preparation on its own: `|x>|+^ell>|0>` with the numerator
/// register `k`, comparison flag and (gate-level) work wires.
#[derive(Clone, Debug)]
pub struct CxFragment {
    pub circuit: CircuitSpec,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub k: Vec<usize>,
    pub flag: usize,
}

fn numerator_oracle(term: &Arc<OneSparseTerm>, control: Option<usize>, x: &[usize], k: &[usize]) -> Gate {
    let t = Arc::clone(term);
    let n = x.len();
    match control {
        None => Gate::Oracle(OracleGate::new("value", x.to_vec(), k.to_vec(), move |v| {
            term_oracle(&t, v as u64).numerator as u128
        })),
        Some(c) => {
            let inputs: Vec<usize> = std::iter::once(c).chain(x.iter().copied()).collect();
            Gate::Oracle(OracleGate::new("cvalue", inputs, k.to_vec(), move |v| {
                if v >> n & 1 == 1 {
                    term_oracle(&t, (v & ((1u128 << n) - 1)) as u64).numerator as u128
                } else {
                    0
                }
            }))
        }
    }
}

fn compare(backend: Backend, w: &ComparatorWires) -> Result<Vec<Gate>> {
    match backend {
        Backend::Fast => Ok(vec![comparator_oracle(w)?]),
        Backend::GateLevel => comparator_gates(w),
    }
}

fn check_term(term: &OneSparseTerm) -> Result<()> {
    if term.ell() == 0 {
        bail!(Precision, "term precision must be at least one bit");
    }
    if term.entries().any(|(_, _, v)| v.sign() == crate::Sign::Positive) {
        bail!(Convention, "verifier terms must have entries in [-1, 0]");
    }
    Ok(())
}

struct Alloc {
    next: usize,
}

impl Alloc {
    fn take(&mut self, count: usize) -> Vec<usize> {
        let r = (self.next..self.next + count).collect();
        self.next += count;
        r
    }

    fn one(&mut self) -> usize {
        self.take(1)[0]
    }
}

fn work_len(backend: Backend, ell: usize) -> usize {
    match backend {
        Backend::Fast => 0,
        Backend::GateLevel => ell + 1,
    }
}

fn check_width(layout: &WireLayout) -> Result<()> {
    if layout.total() > 128 {
        bail!(Resource, "term circuit needs {} wires, the simulator supports 128", layout.total());
    }
    Ok(())
}

/// Builds the `|c_x>` preparation for `term`.
pub fn prepare_cx(term: &OneSparseTerm, backend: Backend) -> Result<CxFragment> {
    check_term(term)?;
    let (n, ell) = (term.n() as usize, term.ell() as usize);
    let work = work_len(backend, ell);
    let layout = WireLayout { input: 0, witness: n, zero: ell + 2 + work, plus: ell };
    check_width(&layout)?;
    let mut a = Alloc { next: 0 };
    let x = a.take(n);
    let k = a.take(ell + 1);
    let flag = a.one();
    let work = a.take(work);
    let y = a.take(ell);
    let term = Arc::new(term.clone());
    let cw = ComparatorWires { y: y.clone(), k: k.clone(), flag, work };
    let mut gates = vec![numerator_oracle(&term, None, &x, &k)];
    gates.extend(compare(backend, &cw)?);
    Ok(CxFragment { circuit: CircuitSpec::new(layout, gates)?, x, y, k, flag })
}

/// First procedure: prepare `|c_x>`, apply the pairing `x -> f(x)` controlled
/// on a plus qubit, accept on `|+>` for the control and `|1>` for the flag.
pub fn v1_term_circuit(term: &OneSparseTerm, backend: Backend) -> Result<TermCircuit> {
    check_term(term)?;
    let (n, ell) = (term.n() as usize, term.ell() as usize);
    let work_n = work_len(backend, ell);
    let layout = WireLayout { input: 0, witness: n, zero: (ell + 1) + 1 + n + 2 + work_n, plus: 1 + ell };
    check_width(&layout)?;
    let mut a = Alloc { next: 0 };
    let x = a.take(n);
    let k = a.take(ell + 1);
    let flag = a.one();
    let s = a.take(n);
    let present = a.one();
    let and = a.one();
    let work = a.take(work_n);
    let ctrl = a.one();
    let y = a.take(ell);

    let term = Arc::new(term.clone());
    let cw = ComparatorWires { y: y.clone(), k: k.clone(), flag, work };
    let t_present = Arc::clone(&term);
    let present_oracle = Gate::Oracle(OracleGate::new("present", x.clone(), vec![present], move |v| {
        term_oracle(&t_present, v as u64).present as u128
    }));
    let t_pair = Arc::clone(&term);
    let pair_oracle = Gate::Oracle(OracleGate::new("partner", x.clone(), s.clone(), move |v| {
        term_oracle(&t_pair, v as u64).partner as u128
    }));

    let mut gates = vec![numerator_oracle(&term, None, &x, &k)];
    gates.extend(compare(backend, &cw)?);
    // controlled x -> f(x) through the scratch register s, flagged by presence
    gates.push(present_oracle.clone());
    gates.push(Gate::toffoli(ctrl, present, and));
    gates.push(pair_oracle.clone());
    gates.extend(x.iter().zip(&s).map(|(&xi, &si)| Gate::fredkin(and, xi, si)));
    gates.push(pair_oracle);
    gates.push(Gate::toffoli(ctrl, present, and));
    gates.push(present_oracle);

    let projector = ProjectorSpec::new(vec![
        ProjectorTarget { wire: ctrl, target: Target::Plus },
        ProjectorTarget { wire: flag, target: Target::One },
    ])?;
    Ok(TermCircuit {
        procedure: Procedure::V1,
        circuit: CircuitSpec::new(layout, gates)?,
        projector,
        y,
        controls: vec![ctrl],
    })
}

/// Second procedure: prepare `|c_x>` controlled on a plus qubit and accept
/// when the flag reads `|0>`. A spare plus ancilla carries the mandatory
/// leading `|+>` projector factor and accepts with certainty.
pub fn v2_term_circuit(term: &OneSparseTerm, backend: Backend) -> Result<TermCircuit> {
    check_term(term)?;
    let (n, ell) = (term.n() as usize, term.ell() as usize);
    let work_n = work_len(backend, ell);
    let layout = WireLayout { input: 0, witness: n, zero: (ell + 1) + 1 + work_n, plus: 2 + ell };
    check_width(&layout)?;
    let mut a = Alloc { next: 0 };
    let x = a.take(n);
    let k = a.take(ell + 1);
    let flag = a.one();
    let work = a.take(work_n);
    let spare = a.one();
    let ctrl = a.one();
    let y = a.take(ell);

    let term = Arc::new(term.clone());
    let cw = ComparatorWires { y: y.clone(), k: k.clone(), flag, work };
    let mut gates = vec![numerator_oracle(&term, Some(ctrl), &x, &k)];
    gates.extend(compare(backend, &cw)?);
    let projector = ProjectorSpec::new(vec![
        ProjectorTarget { wire: spare, target: Target::Plus },
        ProjectorTarget { wire: flag, target: Target::Zero },
    ])?;
    Ok(TermCircuit {
        procedure: Procedure::V2,
        circuit: CircuitSpec::new(layout, gates)?,
        projector,
        y,
        controls: vec![spare, ctrl],
    })
}
