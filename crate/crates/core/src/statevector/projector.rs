use serde::{Deserialize, Serialize};

use super::gate::{bit, mask};
use crate::error::{bail, Result};

/// Single-qubit target state of a projector factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Zero,
    One,
    Plus,
}

impl Target {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zero" | "0" => Ok(Target::Zero),
            "one" | "1" => Ok(Target::One),
            "plus" | "+" => Ok(Target::Plus),
            other => bail!(Parse, "unknown projector target {other:?}"),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Target::Zero => "zero",
            Target::One => "one",
            Target::Plus => "plus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectorTarget {
    pub wire: usize,
    pub target: Target,
}

/// Product projector over a set of distinct wires. Verifier-legal projectors
/// (built with [`ProjectorSpec::new`]) are non-empty and start with a plus
/// factor; [`ProjectorSpec::general`] drops that restriction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectorSpec {
    pub targets: Vec<ProjectorTarget>,
}

impl ProjectorSpec {
    pub fn new(targets: Vec<ProjectorTarget>) -> Result<Self> {
        match targets.first() {
            None => bail!(Argument, "projector must have at least one target"),
            Some(t) if t.target != Target::Plus => {
                bail!(Argument, "first projector target must be plus, got {}", t.target.as_str())
            }
            _ => {}
        }
        Self::general(targets)
    }

    pub fn general(targets: Vec<ProjectorTarget>) -> Result<Self> {
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].iter().any(|u| u.wire == t.wire) {
                bail!(Argument, "projector wire {} listed twice", t.wire);
            }
        }
        Ok(Self { targets })
    }

    /// Targets on wires `0..targets.len()`.
    pub fn leading(targets: &[Target]) -> Result<Self> {
        Self::new(
            targets
                .iter()
                .enumerate()
                .map(|(wire, &target)| ProjectorTarget { wire, target })
                .collect(),
        )
    }

    pub fn is_verifier_legal(&self) -> bool {
        self.targets.first().is_some_and(|t| t.target == Target::Plus)
    }

    pub fn validate_for(&self, qubits: usize) -> Result<()> {
        if let Some(t) = self.targets.iter().find(|t| t.wire >= qubits) {
            bail!(Argument, "projector wire {} out of range for {qubits} qubits", t.wire);
        }
        Ok(())
    }

    pub fn wires(&self) -> Vec<usize> {
        self.targets.iter().map(|t| t.wire).collect()
    }

    /// Applies the projector to a dense real amplitude vector in place.
    pub fn apply_dense(&self, qubits: usize, amps: &mut [f64]) {
        for t in &self.targets {
            let mk = mask(qubits, t.wire);
            match t.target {
                Target::Zero | Target::One => {
                    let want = t.target == Target::One;
                    for (i, a) in amps.iter_mut().enumerate() {
                        if bit(i as u128, qubits, t.wire) != want {
                            *a = 0.0;
                        }
                    }
                }
                Target::Plus => {
                    let mk = mk as usize;
                    for i in 0..amps.len() {
                        if i & mk == 0 {
                            let s = 0.5 * (amps[i] + amps[i | mk]);
                            amps[i] = s;
                            amps[i | mk] = s;
                        }
                    }
                }
            }
        }
    }

    /// `||P psi||^2` for a sparse state given as distinct `(index, amplitude)`
    /// pairs. Deterministic: merges are done after a stable sort.
    pub fn probability_sparse(&self, qubits: usize, entries: &[(u128, f64)]) -> f64 {
        let mut cur: Vec<(u128, f64)> = entries.to_vec();
        for t in &self.targets {
            let mk = mask(qubits, t.wire);
            match t.target {
                Target::Zero => cur.retain(|(k, _)| k & mk == 0),
                Target::One => {
                    cur.retain(|(k, _)| k & mk != 0);
                    for e in cur.iter_mut() {
                        e.0 &= !mk;
                    }
                }
                Target::Plus => {
                    // <+|_q psi, stored with bit q cleared
                    for e in cur.iter_mut() {
                        e.0 &= !mk;
                        e.1 *= std::f64::consts::FRAC_1_SQRT_2;
                    }
                    cur.sort_by_key(|e| e.0);
                    let mut merged: Vec<(u128, f64)> = Vec::with_capacity(cur.len());
                    for (k, a) in cur.drain(..) {
                        match merged.last_mut() {
                            Some(last) if last.0 == k => last.1 += a,
                            _ => merged.push((k, a)),
                        }
                    }
                    cur = merged;
                }
            }
        }
        cur.iter().map(|(_, a)| a * a).sum()
    }
}
