use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::gate::{ClassicalFunction, Gate, OracleGate};
use super::projector::ProjectorSpec;
use super::sparse::SparseState;
use super::state::{prepare_input, StateVector};
use crate::error::{bail, Result};

/// Register sizes in canonical order: input, witness, zero ancillas, plus
/// ancillas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireLayout {
    pub input: usize,
    pub witness: usize,
    pub zero: usize,
    pub plus: usize,
}

impl WireLayout {
    pub fn total(&self) -> usize {
        self.input + self.witness + self.zero + self.plus
    }

    pub fn input_wires(&self) -> std::ops::Range<usize> {
        0..self.input
    }

    pub fn witness_wires(&self) -> std::ops::Range<usize> {
        self.input..self.input + self.witness
    }

    pub fn zero_wires(&self) -> std::ops::Range<usize> {
        let s = self.input + self.witness;
        s..s + self.zero
    }

    pub fn plus_wires(&self) -> std::ops::Range<usize> {
        let s = self.input + self.witness + self.zero;
        s..s + self.plus
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    pub layout: WireLayout,
    pub gates: Vec<Gate>,
}

impl CircuitSpec {
    pub fn new(layout: WireLayout, gates: Vec<Gate>) -> Result<Self> {
        let c = Self { layout, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn qubits(&self) -> usize {
        self.layout.total()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.qubits();
        if m > 128 {
            bail!(Resource, "circuits are limited to 128 wires, got {m}");
        }
        self.gates.iter().try_for_each(|g| g.validate(m))
    }

    /// Number of gates after SWAP/Fredkin expansion.
    pub fn elementary_len(&self) -> usize {
        self.gates.iter().map(|g| g.elementary().len()).sum()
    }

    pub fn run_dense(&self, state: &mut StateVector) -> Result<()> {
        if state.qubits() != self.qubits() {
            bail!(Argument, "state has {} qubits, circuit has {}", state.qubits(), self.qubits());
        }
        state.run(&self.gates)
    }

    /// Dense acceptance probability on input `x` and witness.
    pub fn acceptance(&self, x: &[bool], witness: &StateVector, proj: &ProjectorSpec) -> Result<f64> {
        self.check_registers(x.len(), witness.qubits())?;
        let mut s = prepare_input(x, witness, self.layout.zero, self.layout.plus)?;
        s.run(&self.gates)?;
        s.acceptance_probability(proj)
    }

    /// Same as [`CircuitSpec::acceptance`] on a sparse representation.
    pub fn acceptance_sparse(&self, x: &[bool], witness: &SparseState, proj: &ProjectorSpec) -> Result<f64> {
        self.check_registers(x.len(), witness.qubits())?;
        let mut s = SparseState::from_bits(x)?
            .tensor(witness)?
            .tensor(&SparseState::basis(self.layout.zero, 0)?)?
            .tensor(&SparseState::plus(self.layout.plus)?)?;
        s.run(&self.gates)?;
        s.acceptance_probability(proj)
    }

    fn check_registers(&self, input: usize, witness: usize) -> Result<()> {
        if input != self.layout.input || witness != self.layout.witness {
            bail!(
                Argument,
                "register sizes ({input}, {witness}) do not match layout ({}, {})",
                self.layout.input,
                self.layout.witness
            );
        }
        Ok(())
    }

    /// Text form; SWAP and Fredkin gates are written as CNOT/Toffoli.
    pub fn to_text(&self) -> String {
        let l = &self.layout;
        let mut out = format!("WIRES input={} witness={} zero={} plus={}\n", l.input, l.witness, l.zero, l.plus);
        for g in self.gates.iter().flat_map(Gate::elementary) {
            write_gate(&mut out, &g);
        }
        out
    }

    pub fn parse(text: &str, oracles: &OracleRegistry) -> Result<Self> {
        let mut layout = None;
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = |msg: String| crate::Error::Parse(format!("line {}: {msg}", lineno + 1));
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap_or_default().to_ascii_uppercase();
            let rest: Vec<&str> = toks.collect();
            if head == "WIRES" {
                if layout.is_some() {
                    return Err(ctx("duplicate WIRES header".into()));
                }
                layout = Some(parse_layout(&rest).map_err(|e| ctx(e.to_string()))?);
                continue;
            }
            if layout.is_none() {
                return Err(ctx("WIRES header must come first".into()));
            }
            let gate = parse_gate(&head, &rest, oracles).map_err(|e| ctx(e.to_string()))?;
            gates.push(gate);
        }
        let Some(layout) = layout else { bail!(Parse, "missing WIRES header") };
        Self::new(layout, gates)
    }
}

pub(crate) fn write_gate(out: &mut String, g: &Gate) {
    match g {
        Gate::X(q) => writeln!(out, "X {q}"),
        Gate::Cnot { control, target } => writeln!(out, "CNOT {control} {target}"),
        Gate::Toffoli { c1, c2, target } => writeln!(out, "TOFFOLI {c1} {c2} {target}"),
        Gate::Oracle(o) => {
            let ins: Vec<String> = o.inputs.iter().map(|w| w.to_string()).collect();
            let outs: Vec<String> = o.outputs.iter().map(|w| w.to_string()).collect();
            writeln!(out, "ORACLE {} {} -> {}", o.name, ins.join(" "), outs.join(" "))
        }
        Gate::Swap(..) | Gate::Fredkin { .. } => {
            for e in g.elementary() {
                write_gate(out, &e);
            }
            Ok(())
        }
    }
    .expect("writing to a String cannot fail");
}

fn parse_layout(toks: &[&str]) -> Result<WireLayout> {
    let mut layout = WireLayout::default();
    let mut seen = [false; 4];
    for t in toks {
        let Some((k, v)) = t.split_once('=') else { bail!(Parse, "expected key=value, got {t:?}") };
        let v: usize = v.parse().map_err(|_| crate::Error::Parse(format!("bad count {v:?}")))?;
        let slot = match k {
            "input" => 0,
            "witness" => 1,
            "zero" => 2,
            "plus" => 3,
            _ => bail!(Parse, "unknown register {k:?}"),
        };
        if seen[slot] {
            bail!(Parse, "register {k} given twice");
        }
        seen[slot] = true;
        match slot {
            0 => layout.input = v,
            1 => layout.witness = v,
            2 => layout.zero = v,
            _ => layout.plus = v,
        }
    }
    Ok(layout)
}

pub(crate) fn parse_wires(toks: &[&str]) -> Result<Vec<usize>> {
    toks.iter()
        .map(|t| t.parse::<usize>().map_err(|_| crate::Error::Parse(format!("bad wire index {t:?}"))))
        .collect()
}

pub(crate) fn parse_gate(head: &str, rest: &[&str], oracles: &OracleRegistry) -> Result<Gate> {
    let arity = |n: usize| -> Result<Vec<usize>> {
        if rest.len() != n {
            bail!(Parse, "{head} takes {n} wires, got {}", rest.len());
        }
        parse_wires(rest)
    };
    Ok(match head {
        "X" => Gate::X(arity(1)?[0]),
        "CNOT" => {
            let w = arity(2)?;
            Gate::cnot(w[0], w[1])
        }
        "TOFFOLI" => {
            let w = arity(3)?;
            Gate::toffoli(w[0], w[1], w[2])
        }
        "SWAP" => {
            let w = arity(2)?;
            Gate::Swap(w[0], w[1])
        }
        "FREDKIN" => {
            let w = arity(3)?;
            Gate::fredkin(w[0], w[1], w[2])
        }
        "ORACLE" => {
            let Some((name, wires)) = rest.split_first() else { bail!(Parse, "ORACLE needs a name") };
            let Some(arrow) = wires.iter().position(|t| *t == "->") else { bail!(Parse, "ORACLE needs '->'") };
            let inputs = parse_wires(&wires[..arrow])?;
            let outputs = parse_wires(&wires[arrow + 1..])?;
            let Some(function) = oracles.get(name) else { bail!(Parse, "unknown oracle {name:?}") };
            Gate::Oracle(OracleGate { name: name.to_string(), inputs, outputs, function })
        }
        other => bail!(Parse, "unknown gate {other:?}"),
    })
}

/// Named classical functions available to the circuit parser.
#[derive(Clone, Default)]
pub struct OracleRegistry {
    map: BTreeMap<String, Arc<dyn ClassicalFunction>>,
}

impl OracleRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, f: Arc<dyn ClassicalFunction>) {
        self.map.insert(name.into(), f);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn ClassicalFunction>> {
        self.map.get(name).cloned()
    }

    /// Registry holding every oracle that appears in `gates`.
    pub fn from_gates(gates: &[Gate]) -> Self {
        let mut r = Self::new();
        for g in gates {
            if let Gate::Oracle(o) = g {
                r.insert(o.name.clone(), Arc::clone(&o.function));
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::projector::Target;

    #[test]
    fn text_round_trip() {
        let layout = WireLayout { input: 1, witness: 2, zero: 2, plus: 1 };
        let gates = vec![
            Gate::X(0),
            Gate::cnot(1, 3),
            Gate::fredkin(5, 1, 2),
            Gate::Oracle(OracleGate::new("par", vec![1, 2], vec![4], |v| (v.count_ones() & 1) as u128)),
        ];
        let c = CircuitSpec::new(layout, gates).unwrap();
        let text = c.to_text();
        let reg = OracleRegistry::from_gates(&c.gates);
        let back = CircuitSpec::parse(&text, &reg).unwrap();
        assert_eq!(back.layout, layout);
        assert_eq!(back.gates.len(), 6);
        assert_eq!(back.to_text(), text);
        let w = StateVector::from_amplitudes(2, vec![0.5, 0.5, -0.5, 0.5]).unwrap();
        let p = ProjectorSpec::leading(&[Target::Plus]).unwrap();
        let a = c.acceptance(&[true], &w, &p).unwrap();
        let b = back.acceptance(&[true], &w, &p).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn parse_errors() {
        let reg = OracleRegistry::new();
        assert!(CircuitSpec::parse("X 0\n", &reg).is_err());
        assert!(CircuitSpec::parse("WIRES input=1\nCNOT 0\n", &reg).is_err());
        assert!(CircuitSpec::parse("WIRES input=1\nORACLE f 0 -> 0\n", &reg).is_err());
        assert!(CircuitSpec::parse("WIRES input=1\nFOO 0\n", &reg).is_err());
        assert!(CircuitSpec::parse("WIRES input=2 # two\n\nCNOT 0 1 # c\n", &reg).is_ok());
    }
}
