//! Sparse real symmetric Hamiltonians with exact fixed-point entries and
//! neighbor/entry oracle access.

mod decompose;
mod io;

pub use decompose::{decompose_1sparse, recompose, term_oracle, verify_decomposition, OneSparseTerm, TermQuery};
pub use io::{load_instance, save_instance, InstanceFile, InstanceRow, InstanceEntry};

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{bail, Result};
use crate::fixed::{FixedPoint, Sign, MAX_PRECISION};

/// Default fixed-point precision for generated instances.
pub const DEFAULT_PRECISION: u32 = 16;

/// Largest qubit count whose rows are stored explicitly.
pub const MAX_STORED_QUBITS: u32 = 24;

/// Query access to a sparse Hamiltonian: the neighbor oracle `O_F` and the
/// entry oracle `O_H`. Slots are 1-based.
pub trait SparseOracle {
    fn qubits(&self) -> u32;
    fn sparsity(&self) -> usize;
    fn precision(&self) -> u32;

    /// Column of the `slot`-th nonzero of row `x` in ascending order, or `x`
    /// itself when the row has fewer than `slot` nonzeros.
    fn neighbor(&self, x: u64, slot: usize) -> Result<u64>;

    /// The exact entry `H[x, y]` (zero when absent).
    fn entry(&self, x: u64, y: u64) -> Result<FixedPoint>;
}

/// An `n`-qubit symmetric matrix with at most `d` nonzeros per row, stored row
/// by row with columns in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseHamiltonian {
    n: u32,
    d: usize,
    ell: u32,
    rows: Vec<Vec<(u64, FixedPoint)>>,
}

impl SparseHamiltonian {
    pub fn zero(n: u32, d: usize, ell: u32) -> Result<Self> {
        Self::from_symmetric_entries(n, d, ell, std::iter::empty())
    }

    /// Builds an instance from entries listed once per unordered pair `{x, y}`
    /// (either orientation); the mirror entry is added automatically. Zero
    /// values are dropped.
    pub fn from_symmetric_entries<I>(n: u32, d: usize, ell: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64, FixedPoint)>,
    {
        if n > MAX_STORED_QUBITS {
            bail!(Resource, "{n} qubits exceeds the stored-row cap of {MAX_STORED_QUBITS}");
        }
        if ell > MAX_PRECISION {
            bail!(Precision, "precision {ell} exceeds {MAX_PRECISION}");
        }
        let dim = 1u64 << n;
        let mut map: BTreeMap<(u64, u64), FixedPoint> = BTreeMap::new();
        for (x, y, v) in entries {
            if x >= dim || y >= dim {
                bail!(Argument, "entry ({x}, {y}) out of range for {n} qubits");
            }
            if v.precision() != ell {
                bail!(Precision, "entry ({x}, {y}) has precision {} but instance uses {ell}", v.precision());
            }
            if v.is_zero() {
                continue;
            }
            let key = (x.min(y), x.max(y));
            if map.insert(key, v).is_some() {
                bail!(Argument, "entry ({x}, {y}) listed twice");
            }
        }
        let mut rows = vec![Vec::new(); dim as usize];
        for (&(x, y), &v) in &map {
            rows[x as usize].push((y, v));
            if x != y {
                rows[y as usize].push((x, v));
            }
        }
        for row in &mut rows {
            row.sort_by_key(|&(c, _)| c);
        }
        let h = Self { n, d, ell, rows };
        h.validate()?;
        Ok(h)
    }

    /// Checks symmetry, ordering, sparsity and precision.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if self.rows.len() as u64 != dim {
            bail!(Invariant, "expected {dim} rows, found {}", self.rows.len());
        }
        for (x, row) in self.rows.iter().enumerate() {
            let x = x as u64;
            if row.len() > self.d {
                bail!(Invariant, "row {x} has {} nonzeros, sparsity bound is {}", row.len(), self.d);
            }
            for w in row.windows(2) {
                if w[0].0 >= w[1].0 {
                    bail!(Invariant, "row {x} columns not strictly ascending");
                }
            }
            for &(y, v) in row {
                if y >= dim {
                    bail!(Invariant, "row {x} has column {y} out of range");
                }
                if v.is_zero() {
                    bail!(Invariant, "row {x} stores an explicit zero at column {y}");
                }
                if v.precision() != self.ell {
                    bail!(Invariant, "entry ({x}, {y}) has precision {}", v.precision());
                }
                match self.lookup(y, x) {
                    Some(m) if m == v => {}
                    _ => bail!(Invariant, "entry ({x}, {y}) = {v} has no matching mirror entry"),
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn dim(&self) -> u64 {
        1u64 << self.n
    }

    pub fn row(&self, x: u64) -> &[(u64, FixedPoint)] {
        &self.rows[x as usize]
    }

    pub fn rows(&self) -> &[Vec<(u64, FixedPoint)>] {
        &self.rows
    }

    /// Every stored entry `(x, y, value)`, both orientations of off-diagonals.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, FixedPoint)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |&(y, v)| (x as u64, y, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_row_nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn lookup(&self, x: u64, y: u64) -> Option<FixedPoint> {
        let row = self.rows.get(x as usize)?;
        row.binary_search_by_key(&y, |&(c, _)| c).ok().map(|i| row[i].1)
    }

    /// Same matrix with a different declared sparsity bound.
    pub fn with_sparsity(mut self, d: usize) -> Result<Self> {
        if d < self.max_row_nnz() {
            bail!(Argument, "sparsity {d} below realized row count {}", self.max_row_nnz());
        }
        self.d = d;
        Ok(self)
    }

    pub fn query_neighbor(&self, x: u64, slot: usize) -> Result<u64> {
        if x >= self.dim() {
            bail!(Argument, "row {x} out of range for {} qubits", self.n);
        }
        if slot == 0 || slot > self.d {
            bail!(Argument, "slot {slot} outside 1..={}", self.d);
        }
        Ok(self.row(x).get(slot - 1).map_or(x, |&(y, _)| y))
    }

    pub fn query_entry(&self, x: u64, y: u64) -> Result<FixedPoint> {
        if x >= self.dim() || y >= self.dim() {
            bail!(Argument, "entry ({x}, {y}) out of range for {} qubits", self.n);
        }
        Ok(self.lookup(x, y).unwrap_or_else(|| FixedPoint::zero(self.ell)))
    }

    /// True iff every off-diagonal entry is nonpositive.
    pub fn is_stoquastic(&self) -> bool {
        self.entries().all(|(x, y, v)| x == y || v.sign() != Sign::Positive)
    }

    /// True iff every entry lies in `[-1, 0]`.
    pub fn is_normalized(&self) -> bool {
        self.entries().all(|(_, _, v)| v.sign() != Sign::Positive)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let dim = self.dim() as usize;
        let mut m = DMatrix::zeros(dim, dim);
        for (x, y, v) in self.entries() {
            m[(x as usize, y as usize)] = v.to_f64();
        }
        m
    }

    /// `H |psi>` without densifying.
    pub fn apply(&self, psi: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(y, v)| v.to_f64() * psi[y as usize]).sum())
            .collect()
    }

    /// `<psi| H |psi>` for a real vector.
    pub fn expectation(&self, psi: &[f64]) -> f64 {
        self.apply(psi).iter().zip(psi).map(|(a, b)| a * b).sum()
    }

    pub fn expectation_dv(&self, psi: &DVector<f64>) -> f64 {
        self.expectation(psi.as_slice())
    }
}

impl SparseOracle for SparseHamiltonian {
    fn qubits(&self) -> u32 {
        self.n
    }

    fn sparsity(&self) -> usize {
        self.d
    }

    fn precision(&self) -> u32 {
        self.ell
    }

    fn neighbor(&self, x: u64, slot: usize) -> Result<u64> {
        self.query_neighbor(x, slot)
    }

    fn entry(&self, x: u64, y: u64) -> Result<FixedPoint> {
        self.query_entry(x, y)
    }
}

pub fn query_neighbor(h: &SparseHamiltonian, x: u64, slot: usize) -> Result<u64> {
    h.query_neighbor(x, slot)
}

pub fn query_entry(h: &SparseHamiltonian, x: u64, y: u64) -> Result<FixedPoint> {
    h.query_entry(x, y)
}

pub fn is_stoquastic(h: &SparseHamiltonian) -> bool {
    h.is_stoquastic()
}

/// Maps `H` (with `0 <= H <= I` promised by the caller) to `(H - I) / 2`,
/// whose entries lie in `[-1, 0]` and whose spectrum is `(lambda - 1) / 2`.
///
/// The result keeps the input precision, so every halved numerator must be
/// even. A row with no diagonal entry gains one, so the declared sparsity of
/// the result is `max(d, realized row count)`.
pub fn normalize_shift(h: &SparseHamiltonian) -> Result<SparseHamiltonian> {
    let ell = h.ell();
    let one = 1i64 << ell;
    let mut entries = Vec::with_capacity(h.nnz() + h.dim() as usize);
    for x in 0..h.dim() {
        let mut diag = 0i64;
        for &(y, v) in h.row(x) {
            if y == x {
                diag = v.signed_numerator();
            } else if y > x {
                if v.sign() == Sign::Positive {
                    bail!(Convention, "positive off-diagonal entry ({x}, {y}); input is not stoquastic");
                }
                entries.push((x, y, halve(v.signed_numerator(), ell, x, y)?));
            }
        }
        entries.push((x, x, halve(diag - one, ell, x, x)?));
    }
    let shifted = SparseHamiltonian::from_symmetric_entries(h.n(), usize::MAX, ell, entries)?;
    let d = h.d().max(shifted.max_row_nnz());
    shifted.with_sparsity(d)
}

fn halve(numerator: i64, ell: u32, x: u64, y: u64) -> Result<FixedPoint> {
    if numerator % 2 != 0 {
        bail!(
            Precision,
            "entry ({x}, {y}) needs {} bits after halving; raise the precision",
            ell + 1
        );
    }
    FixedPoint::from_signed(numerator / 2, ell)
}
