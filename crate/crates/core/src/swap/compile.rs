use num::rational::BigRational;
use num::One;

use crate::error::{bail, Result};
use crate::statevector::{
    expand_elementary, CircuitSpec, Gate, ProjectorSpec, ProjectorTarget, Target, WireLayout,
};

/// A verifier that projects several qubits onto a product of `|+>`, `|0>`,
/// `|1>` targets (the first one `|+>`).
#[derive(Clone, Debug)]
pub struct GeneralizedVerifier {
    pub circuit: CircuitSpec,
    pub projector: ProjectorSpec,
}

impl GeneralizedVerifier {
    pub fn new(circuit: CircuitSpec, projector: ProjectorSpec) -> Result<Self> {
        if !projector.is_verifier_legal() {
            bail!(Argument, "projector must be non-empty and start with a plus target");
        }
        projector.validate_for(circuit.qubits())?;
        Ok(Self { circuit, projector })
    }
}

/// Single-qubit verifier: circuit plus a `|+>` projector on wire 0.
#[derive(Clone, Debug)]
pub struct StandardVerifier {
    pub circuit: CircuitSpec,
    pub projector: ProjectorSpec,
}

impl StandardVerifier {
    /// Gate set restricted to X/CNOT/Toffoli (plus oracles) and exactly one
    /// measured qubit, projected onto `|+>`.
    pub fn is_legal(&self) -> bool {
        self.circuit.gates.iter().all(|g| g.is_elementary() || matches!(g, Gate::Oracle(_)))
            && self.projector.targets.len() == 1
            && self.projector.targets[0] == ProjectorTarget { wire: 0, target: Target::Plus }
    }
}

/// SWAP gates (as CNOT triples) moving the projector's wires to the front, and
/// the equivalent projector on the leading wires.
pub fn route_to_front(proj: &ProjectorSpec, qubits: usize) -> Result<(Vec<Gate>, ProjectorSpec)> {
    proj.validate_for(qubits)?;
    // content[w] = original wire whose state currently sits on w
    let mut content: Vec<usize> = (0..qubits).collect();
    let mut swaps = Vec::new();
    for (i, t) in proj.targets.iter().enumerate() {
        let loc = content.iter().position(|&c| c == t.wire).expect("wire is in range");
        if loc != i {
            swaps.push(Gate::Swap(i, loc));
            content.swap(i, loc);
        }
    }
    let leading = proj
        .targets
        .iter()
        .enumerate()
        .map(|(wire, t)| ProjectorTarget { wire, target: t.target })
        .collect();
    Ok((expand_elementary(&swaps), ProjectorSpec::general(leading)?))
}

/// SWAP-test compilation: prepare the product reference `|phi>` of the
/// projector targets on fresh ancillas, run the original circuit, SWAP-test
/// the measured wires against the reference with a `|+>` control, and move
/// the control to wire 0. Acceptance becomes `1/2 + Pr[original]/2`.
///
/// Layout: zero-type references follow the original zero ancillas, plus-type
/// references follow the original plus ancillas, and the control is last.
pub fn compile_generalized(vg: &GeneralizedVerifier) -> Result<StandardVerifier> {
    let l = vg.circuit.layout;
    let targets = &vg.projector.targets;
    let r_zero = targets.iter().filter(|t| t.target != Target::Plus).count();
    let r_plus = targets.len() - r_zero;
    let layout = WireLayout { input: l.input, witness: l.witness, zero: l.zero + r_zero, plus: l.plus + r_plus + 1 };
    let m = layout.total();
    if m > 128 {
        bail!(Resource, "compiled circuit needs {m} wires");
    }
    let old_plus_start = l.input + l.witness + l.zero;
    let remap = |w: usize| if w < old_plus_start { w } else { w + r_zero };
    let zero_ref_start = old_plus_start;
    let plus_ref_start = old_plus_start + r_zero + l.plus;
    let control = m - 1;

    let mut gates = Vec::new();
    let (mut zi, mut pi) = (0, 0);
    let mut refs = Vec::with_capacity(targets.len());
    for t in targets {
        let r = match t.target {
            Target::Plus => {
                pi += 1;
                plus_ref_start + pi - 1
            }
            Target::Zero | Target::One => {
                zi += 1;
                zero_ref_start + zi - 1
            }
        };
        if t.target == Target::One {
            gates.push(Gate::X(r));
        }
        refs.push(r);
    }
    gates.extend(vg.circuit.gates.iter().map(|g| g.remap(remap)));
    for (t, &r) in targets.iter().zip(&refs) {
        gates.push(Gate::fredkin(control, remap(t.wire), r));
    }
    let single = ProjectorSpec::new(vec![ProjectorTarget { wire: control, target: Target::Plus }])?;
    let (route, projector) = route_to_front(&single, m)?;
    gates.extend(route);
    let circuit = CircuitSpec::new(layout, expand_elementary(&gates))?;
    Ok(StandardVerifier { circuit, projector: ProjectorSpec::new(projector.targets)? })
}

/// `((1 + a)/2, (1 + b)/2)`.
pub fn transport_thresholds(a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    ((BigRational::one() + a) / &two, (BigRational::one() + b) / &two)
}
