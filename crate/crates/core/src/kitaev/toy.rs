//! Small verifiers `U = U_T ... U_1` whose steps are basis permutations.

use std::fmt::Write;

use crate::error::{bail, Result};
use crate::statevector::{
    parse_gate, write_gate, Gate, OracleRegistry, ProjectorSpec, ProjectorTarget, StateVector, Target,
};

/// Largest number of steps `T`.
pub const MAX_STEPS: usize = 8;

/// Wires are ordered `[zero ancillas, plus ancillas, P1, P2]`. With a
/// non-empty `split`, P1 and P2 each hold `sum(split)` qubits divided into
/// sub-registers of the listed sizes, and step `i < split.len()` is the SWAP
/// test between sub-register `i` of P1 and of P2, controlled by plus ancilla
/// `i`. With an empty `split` the witness is `witness` unstructured qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ToyVerifier {
    zero: usize,
    plus: usize,
    witness: usize,
    split: Vec<usize>,
    steps: Vec<Vec<Gate>>,
    accept: ProjectorSpec,
}

impl ToyVerifier {
    /// Two-proof verifier: SWAP-test prefix followed by `body`, which may not
    /// touch P2.
    pub fn with_swap_prefix(
        zero: usize,
        plus: usize,
        split: Vec<usize>,
        body: Vec<Vec<Gate>>,
        accept: ProjectorSpec,
    ) -> Result<Self> {
        if split.is_empty() || split.contains(&0) {
            bail!(Argument, "split must list positive sub-register sizes");
        }
        if plus < split.len() {
            bail!(Argument, "{} SWAP tests need as many plus ancillas, got {plus}", split.len());
        }
        let p: usize = split.iter().sum();
        let mut v = Self { zero, plus, witness: 2 * p, split, steps: vec![], accept };
        let mut steps: Vec<Vec<Gate>> = (0..v.split.len()).map(|i| v.swap_step(i)).collect();
        let p2 = v.p2_wires();
        for (i, step) in body.iter().enumerate() {
            if step.iter().any(|g| g.wires().iter().any(|w| p2.contains(w))) {
                bail!(Argument, "body step {} acts on P2", i + 1);
            }
        }
        steps.extend(body);
        v.steps = steps;
        v.validate()?;
        Ok(v)
    }

    /// Verifier without two-proof structure.
    pub fn plain(zero: usize, plus: usize, witness: usize, steps: Vec<Vec<Gate>>, accept: ProjectorSpec) -> Result<Self> {
        let v = Self { zero, plus, witness, split: vec![], steps, accept };
        v.validate()?;
        Ok(v)
    }

    fn validate(&self) -> Result<()> {
        if self.steps.len() > MAX_STEPS {
            bail!(Argument, "{} steps exceed the cap of {MAX_STEPS}", self.steps.len());
        }
        let q = self.qubits();
        for step in &self.steps {
            for g in step {
                if matches!(g, Gate::Oracle(_)) {
                    bail!(Argument, "toy verifiers take X/CNOT/Toffoli/SWAP/Fredkin gates only");
                }
                g.validate(q)?;
            }
        }
        self.accept.validate_for(q)
    }

    fn swap_step(&self, i: usize) -> Vec<Gate> {
        let offset: usize = self.split[..i].iter().sum();
        let p = self.proof_qubits();
        let base = self.zero + self.plus + offset;
        (0..self.split[i]).map(|j| Gate::fredkin(self.zero + i, base + j, base + p + j)).collect()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn plus(&self) -> usize {
        self.plus
    }

    pub fn ancillas(&self) -> usize {
        self.zero + self.plus
    }

    pub fn witness(&self) -> usize {
        self.witness
    }

    pub fn split(&self) -> &[usize] {
        &self.split
    }

    pub fn has_swap_prefix(&self) -> bool {
        !self.split.is_empty()
    }

    /// Qubits per proof (zero without two-proof structure).
    pub fn proof_qubits(&self) -> usize {
        self.split.iter().sum()
    }

    pub fn p2_wires(&self) -> std::ops::Range<usize> {
        let start = self.ancillas() + self.proof_qubits();
        start..start + self.proof_qubits()
    }

    pub fn qubits(&self) -> usize {
        self.ancillas() + self.witness
    }

    /// `T`.
    pub fn steps(&self) -> usize {
        self.steps.len()
    }

    pub fn step(&self, t: usize) -> &[Gate] {
        &self.steps[t - 1]
    }

    pub fn accept(&self) -> &ProjectorSpec {
        &self.accept
    }

    /// `U_t` as a map on basis indices.
    pub fn step_permutation(&self, t: usize) -> Vec<usize> {
        let q = self.qubits();
        (0..1usize << q)
            .map(|x| self.step(t).iter().fold(x as u128, |i, g| g.map_index(i, q)) as usize)
            .collect()
    }

    /// `|0^zero> |+^plus> |psi>`.
    pub fn initial_state(&self, witness: &StateVector) -> Result<StateVector> {
        if witness.qubits() != self.witness {
            bail!(Argument, "witness has {} qubits, verifier expects {}", witness.qubits(), self.witness);
        }
        StateVector::basis(self.zero, 0)?.tensor(&StateVector::plus(self.plus)?)?.tensor(witness)
    }

    /// `U_t ... U_1 |init>` for `t = 0..=T`.
    pub fn trajectory(&self, witness: &StateVector) -> Result<Vec<StateVector>> {
        let mut cur = self.initial_state(witness)?;
        let mut out = vec![cur.clone()];
        for step in &self.steps {
            cur.run(step)?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    pub fn acceptance(&self, witness: &StateVector) -> Result<f64> {
        let fin = self.trajectory(witness)?.pop().expect("trajectory is non-empty");
        fin.acceptance_probability(&self.accept)
    }

    pub fn rejection(&self, witness: &StateVector) -> Result<f64> {
        Ok(1.0 - self.acceptance(witness)?)
    }

    /// Honest two-proof witness `psi ⊗ psi`.
    pub fn honest_witness(&self, psi: &StateVector) -> Result<StateVector> {
        if !self.has_swap_prefix() || psi.qubits() != self.proof_qubits() {
            bail!(Argument, "honest witness needs a two-proof verifier and a {}-qubit proof", self.proof_qubits());
        }
        psi.tensor(psi)
    }

    /// Text form: a `TOY` header, one `STEP` line per body step (gates
    /// separated by `;`, `I` for the identity) and an `ACCEPT` line of
    /// `wire:target` pairs. The SWAP prefix is implied by `split=`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.has_swap_prefix() {
            let split: Vec<String> = self.split.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "TOY zero={} plus={} split={}", self.zero, self.plus, split.join(","));
        } else {
            let _ = writeln!(out, "TOY zero={} plus={} witness={}", self.zero, self.plus, self.witness);
        }
        for step in &self.steps[self.split.len()..] {
            let gates: Vec<String> = step.iter().map(gate_text).collect();
            let body = if gates.is_empty() { "I".to_string() } else { gates.join("; ") };
            let _ = writeln!(out, "STEP {body}");
        }
        let targets: Vec<String> =
            self.accept.targets.iter().map(|t| format!("{}:{}", t.wire, t.target.as_str())).collect();
        let _ = writeln!(out, "ACCEPT {}", targets.join(" "));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize, Option<usize>, Vec<usize>)> = None;
        let mut body = Vec::new();
        let mut accept = None;
        let registry = OracleRegistry::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = |msg: String| crate::Error::Parse(format!("line {}: {msg}", lineno + 1));
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match head.to_ascii_uppercase().as_str() {
                "TOY" => {
                    if header.is_some() {
                        return Err(ctx("duplicate TOY header".into()));
                    }
                    header = Some(parse_header(rest).map_err(|e| ctx(e.to_string()))?);
                }
                "STEP" => {
                    let mut step = Vec::new();
                    for g in rest.split(';').map(str::trim).filter(|g| !g.is_empty()) {
                        let toks: Vec<&str> = g.split_whitespace().collect();
                        let name = toks[0].to_ascii_uppercase();
                        if name == "I" && toks.len() == 1 {
                            continue;
                        }
                        step.push(parse_gate(&name, &toks[1..], &registry).map_err(|e| ctx(e.to_string()))?);
                    }
                    body.push(step);
                }
                "ACCEPT" => {
                    if accept.is_some() {
                        return Err(ctx("duplicate ACCEPT line".into()));
                    }
                    accept = Some(parse_accept(rest).map_err(|e| ctx(e.to_string()))?);
                }
                other => return Err(ctx(format!("unknown directive {other:?}"))),
            }
        }
        let Some((zero, plus, witness, split)) = header else { bail!(Parse, "missing TOY header") };
        let Some(accept) = accept else { bail!(Parse, "missing ACCEPT line") };
        match witness {
            Some(w) => Self::plain(zero, plus, w, body, accept),
            None => Self::with_swap_prefix(zero, plus, split, body, accept),
        }
    }
}

fn gate_text(g: &Gate) -> String {
    match g {
        Gate::Swap(a, b) => format!("SWAP {a} {b}"),
        Gate::Fredkin { control, a, b } => format!("FREDKIN {control} {a} {b}"),
        other => {
            let mut s = String::new();
            write_gate(&mut s, other);
            s.trim_end().to_string()
        }
    }
}

fn parse_header(rest: &str) -> Result<(usize, usize, Option<usize>, Vec<usize>)> {
    let (mut zero, mut plus, mut witness, mut split) = (0, 0, None, None);
    for tok in rest.split_whitespace() {
        let Some((k, v)) = tok.split_once('=') else { bail!(Parse, "expected key=value, got {tok:?}") };
        let num = |s: &str| s.parse::<usize>().map_err(|_| crate::Error::Parse(format!("bad number {s:?}")));
        match k {
            "zero" => zero = num(v)?,
            "plus" => plus = num(v)?,
            "witness" => witness = Some(num(v)?),
            "split" => split = Some(v.split(',').map(num).collect::<Result<Vec<_>>>()?),
            _ => bail!(Parse, "unknown TOY field {k:?}"),
        }
    }
    match (witness, split) {
        (Some(_), Some(_)) => bail!(Parse, "give either witness= or split=, not both"),
        (None, None) => bail!(Parse, "TOY header needs witness= or split="),
        (w, s) => Ok((zero, plus, w, s.unwrap_or_default())),
    }
}

fn parse_accept(rest: &str) -> Result<ProjectorSpec> {
    let targets = rest
        .split_whitespace()
        .map(|tok| {
            let Some((w, t)) = tok.split_once(':') else { bail!(Parse, "expected wire:target, got {tok:?}") };
            let wire = w.parse().map_err(|_| crate::Error::Parse(format!("bad wire {w:?}")))?;
            Ok(ProjectorTarget { wire, target: Target::parse(t)? })
        })
        .collect::<Result<Vec<_>>>()?;
    ProjectorSpec::general(targets)
}

fn plus_zero_accept(ctrl: usize, zeros: &[usize]) -> ProjectorSpec {
    let mut t = vec![ProjectorTarget { wire: ctrl, target: Target::Plus }];
    t.extend(zeros.iter().map(|&wire| ProjectorTarget { wire, target: Target::Zero }));
    ProjectorSpec::general(t).expect("distinct wires")
}

/// `T = 2` yes-instance: SWAP test on one-qubit proofs, then copy P1 into a
/// zero ancilla; accepts when the test passes and the ancilla reads 0. On
/// `psi ⊗ psi` the acceptance is `|<0|psi>|^2`.
pub fn yes_toy() -> ToyVerifier {
    ToyVerifier::with_swap_prefix(1, 1, vec![1], vec![vec![Gate::cnot(2, 0)]], plus_zero_accept(1, &[0]))
        .expect("static toy")
}

/// `T = 1` no-instance: SWAP test on one-qubit proofs; accepts on `|+>` for
/// the control, `|0>` on P1 and `|1>` on P2. Product witnesses are accepted
/// with probability at most 1/4.
pub fn no_toy() -> ToyVerifier {
    let accept = ProjectorSpec::general(vec![
        ProjectorTarget { wire: 0, target: Target::Plus },
        ProjectorTarget { wire: 1, target: Target::Zero },
        ProjectorTarget { wire: 2, target: Target::One },
    ])
    .expect("distinct wires");
    ToyVerifier::with_swap_prefix(0, 1, vec![1], vec![], accept).expect("static toy")
}

/// Family used for gap sweeps: SWAP test on two-qubit proofs followed by
/// `t - 1` steps acting on the zero ancilla and P1.
pub fn sweep_toy(t: usize) -> Result<ToyVerifier> {
    if t == 0 || t > MAX_STEPS {
        bail!(Argument, "sweep toys need 1 <= T <= {MAX_STEPS}");
    }
    let cycle = [
        vec![Gate::cnot(2, 0)],
        vec![Gate::toffoli(2, 3, 0)],
        vec![Gate::X(3), Gate::cnot(3, 2)],
        vec![Gate::cnot(2, 0), Gate::X(2)],
    ];
    let body = (0..t - 1).map(|i| cycle[i % cycle.len()].clone()).collect();
    ToyVerifier::with_swap_prefix(1, 1, vec![2], body, plus_zero_accept(1, &[0]))
}

/// `T = 1`, no ancillas, `U_1 = I`, accepting everything.
pub fn trivial_toy(witness: usize) -> Result<ToyVerifier> {
    ToyVerifier::plain(0, 0, witness, vec![vec![]], ProjectorSpec::general(vec![])?)
}
