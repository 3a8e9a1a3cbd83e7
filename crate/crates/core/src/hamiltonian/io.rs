//! JSON instance files: upper triangle plus diagonal, mirrored on load.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::fixed::{FixedPoint, Sign};

use super::SparseHamiltonian;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: u32,
    pub d: usize,
    pub ell: u32,
    pub rows: Vec<InstanceRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRow {
    pub row: u64,
    pub entries: Vec<InstanceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEntry {
    pub col: u64,
    pub numerator: u64,
    pub sign: i8,
}

impl InstanceFile {
    pub fn from_hamiltonian(h: &SparseHamiltonian) -> Self {
        let rows = (0..h.dim())
            .filter_map(|x| {
                let entries: Vec<_> = h
                    .row(x)
                    .iter()
                    .filter(|&&(y, _)| y >= x)
                    .map(|&(y, v)| InstanceEntry { col: y, numerator: v.numerator(), sign: v.sign().as_i8() })
                    .collect();
                (!entries.is_empty()).then_some(InstanceRow { row: x, entries })
            })
            .collect();
        Self { n: h.n(), d: h.d(), ell: h.ell(), rows }
    }

    /// Mirrors and validates. Positive signs are accepted on the diagonal
    /// only, where a `0 <= H <= I` instance needs them.
    pub fn into_hamiltonian(self) -> Result<SparseHamiltonian> {
        let mut entries = Vec::new();
        for r in &self.rows {
            for e in &r.entries {
                if e.col < r.row {
                    bail!(Parse, "entry ({}, {}) lies below the diagonal; store the upper triangle only", r.row, e.col);
                }
                let sign = Sign::from_i8(e.sign)?;
                if sign == Sign::Positive && e.col != r.row {
                    bail!(Convention, "positive off-diagonal entry ({}, {}) is not stoquastic", r.row, e.col);
                }
                entries.push((r.row, e.col, FixedPoint::new(sign, e.numerator, self.ell)?));
            }
        }
        SparseHamiltonian::from_symmetric_entries(self.n, self.d, self.ell, entries)
    }
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<SparseHamiltonian> {
    let text = std::fs::read_to_string(path)?;
    let file: InstanceFile = serde_json::from_str(&text)?;
    file.into_hamiltonian()
}

pub fn save_instance(h: &SparseHamiltonian, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&InstanceFile::from_hamiltonian(h))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_positive_off_diagonal() {
        let text = r#"{"n":1,"d":2,"ell":4,"rows":[{"row":0,"entries":[{"col":1,"numerator":3,"sign":1}]}]}"#;
        let f: InstanceFile = serde_json::from_str(text).unwrap();
        assert!(matches!(f.into_hamiltonian(), Err(crate::Error::Convention(_))));
    }

    #[test]
    fn mirrors_upper_triangle() {
        let text = r#"{"n":1,"d":2,"ell":4,"rows":[{"row":0,"entries":[{"col":0,"numerator":5,"sign":1},{"col":1,"numerator":3,"sign":-1}]}]}"#;
        let f: InstanceFile = serde_json::from_str(text).unwrap();
        let h = f.clone().into_hamiltonian().unwrap();
        assert_eq!(h.query_entry(1, 0).unwrap().signed_numerator(), -3);
        assert_eq!(InstanceFile::from_hamiltonian(&h), f);
    }

    #[test]
    fn rejects_sparsity_violation() {
        let text = r#"{"n":1,"d":1,"ell":4,"rows":[{"row":0,"entries":[{"col":0,"numerator":5,"sign":1},{"col":1,"numerator":3,"sign":-1}]}]}"#;
        let f: InstanceFile = serde_json::from_str(text).unwrap();
        assert!(matches!(f.into_hamiltonian(), Err(crate::Error::Invariant(_))));
    }
}
