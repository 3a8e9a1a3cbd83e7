//! Partition of a `d`-sparse Hamiltonian into `d^2` one-sparse terms.
//!
//! Each undirected edge `{x, y}` (a nonzero `H[x, y]`, including diagonal
//! loops) receives one color. The preferred color of an edge is the slot pair
//! `(i, j)`: `y` is the `i`-th neighbor of `x` and `x` the `j`-th neighbor of
//! `y`. Two edges sharing a vertex can collide on that pair, in which case the
//! edge falls back to the smallest color free at both endpoints. Each endpoint
//! blocks at most `d - 1` colors, so `2d - 1 <= d^2` colors always suffice.

use std::collections::BTreeMap;

use crate::error::{bail, Result};
use crate::fixed::{FixedPoint, Sign};

use super::SparseHamiltonian;

/// A one-sparse symmetric term: an involution `f` on its support together with
/// the entry `H[x, f(x)]`. Rows outside the support map to themselves with
/// value zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSparseTerm {
    n: u32,
    ell: u32,
    pairs: BTreeMap<u64, (u64, FixedPoint)>,
}

/// Answer of the simulated oracle `O_{f, H_j}` with its presence flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TermQuery {
    pub partner: u64,
    pub numerator: u64,
    pub present: bool,
}

impl OneSparseTerm {
    pub fn empty(n: u32, ell: u32) -> Self {
        Self { n, ell, pairs: BTreeMap::new() }
    }

    /// Builds a term from unordered pairs (`x == y` for a diagonal entry).
    pub fn from_pairs<I>(n: u32, ell: u32, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64, FixedPoint)>,
    {
        let mut t = Self::empty(n, ell);
        for (x, y, v) in pairs {
            t.insert(x, y, v)?;
        }
        Ok(t)
    }

    fn insert(&mut self, x: u64, y: u64, v: FixedPoint) -> Result<()> {
        let dim = 1u64 << self.n;
        if x >= dim || y >= dim {
            bail!(Argument, "pair ({x}, {y}) out of range for {} qubits", self.n);
        }
        if v.precision() != self.ell {
            bail!(Precision, "pair ({x}, {y}) has precision {}, term uses {}", v.precision(), self.ell);
        }
        if v.is_zero() {
            return Ok(());
        }
        if self.pairs.contains_key(&x) || self.pairs.contains_key(&y) {
            bail!(Invariant, "pair ({x}, {y}) breaks one-sparsity");
        }
        self.pairs.insert(x, (y, v));
        self.pairs.insert(y, (x, v));
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Rows with a nonzero entry.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.keys().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.pairs.contains_key(&x)
    }

    /// `f(x)`, with `f(x) = x` off the support.
    pub fn partner(&self, x: u64) -> u64 {
        self.pairs.get(&x).map_or(x, |&(y, _)| y)
    }

    pub fn value(&self, x: u64) -> FixedPoint {
        self.pairs.get(&x).map_or(FixedPoint::zero(self.ell), |&(_, v)| v)
    }

    /// `(x, f(x), H[x, f(x)])` for every supported row.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, FixedPoint)> + '_ {
        self.pairs.iter().map(|(&x, &(y, v))| (x, y, v))
    }

    pub fn is_stoquastic(&self) -> bool {
        self.entries().all(|(x, y, v)| x == y || v.sign() != Sign::Positive)
    }

    /// Distinct numerators appearing in the term, ascending.
    pub fn numerators(&self) -> Vec<u64> {
        let mut ks: Vec<u64> = self.pairs.values().map(|(_, v)| v.numerator()).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// `<psi| H_j |psi>`.
    pub fn expectation(&self, psi: &[f64]) -> f64 {
        self.entries().map(|(x, y, v)| psi[x as usize] * psi[y as usize] * v.to_f64()).sum()
    }

    /// `sum_{x in support} psi_x^2 |H[x, f(x)]|`.
    pub fn weighted_magnitude(&self, psi: &[f64]) -> f64 {
        self.entries().map(|(x, _, v)| psi[x as usize].powi(2) * v.magnitude()).sum()
    }
}

/// The oracle `O_{f, H_j}`: partner row, magnitude numerator and presence flag.
pub fn term_oracle(term: &OneSparseTerm, x: u64) -> TermQuery {
    match term.pairs.get(&x) {
        Some(&(y, v)) => TermQuery { partner: y, numerator: v.numerator(), present: true },
        None => TermQuery { partner: x, numerator: 0, present: false },
    }
}

/// Splits `h` into exactly `max(d^2, 1)` one-sparse terms whose exact sum is
/// `h`, padding with empty terms. The result is checked by
/// [`verify_decomposition`] before it is returned.
pub fn decompose_1sparse(h: &SparseHamiltonian) -> Result<Vec<OneSparseTerm>> {
    let d = h.d();
    let count = (d * d).max(1);
    let mut terms = vec![OneSparseTerm::empty(h.n(), h.ell()); count];
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); h.dim() as usize];

    for x in 0..h.dim() {
        for (i, &(y, v)) in h.row(x).iter().enumerate() {
            if y < x {
                continue;
            }
            let preferred = if y == x {
                i * d + i
            } else {
                let j = h.row(y).binary_search_by_key(&x, |&(c, _)| c).map_err(|_| {
                    crate::Error::Invariant(format!("entry ({x}, {y}) has no mirror"))
                })?;
                i * d + j
            };
            let free = |c: usize| !used[x as usize].contains(&c) && !used[y as usize].contains(&c);
            let color = if free(preferred) {
                preferred
            } else {
                match (0..count).find(|&c| free(c)) {
                    Some(c) => c,
                    None => bail!(Invariant, "no free color for edge ({x}, {y}) with d = {d}"),
                }
            };
            terms[color].insert(x, y, v)?;
            used[x as usize].push(color);
            if y != x {
                used[y as usize].push(color);
            }
        }
    }

    verify_decomposition(h, &terms)?;
    Ok(terms)
}

/// Checks exact recomposition, one-sparsity, the involution property,
/// stoquasticity inheritance, unique entry assignment and the `d^2` length.
pub fn verify_decomposition(h: &SparseHamiltonian, terms: &[OneSparseTerm]) -> Result<()> {
    let expected = (h.d() * h.d()).max(1);
    if terms.len() != expected {
        bail!(Invariant, "expected {expected} terms, found {}", terms.len());
    }
    let mut owner: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for (j, t) in terms.iter().enumerate() {
        if t.n != h.n() || t.ell != h.ell() {
            bail!(Invariant, "term {j} has shape ({}, {}) but instance is ({}, {})", t.n, t.ell, h.n(), h.ell());
        }
        for (x, y, v) in t.entries() {
            if t.partner(y) != x {
                bail!(Invariant, "term {j}: f(f({x})) != {x}");
            }
            if t.value(y) != v {
                bail!(Invariant, "term {j}: value at {x} differs from value at f({x})");
            }
            if h.is_stoquastic() && x != y && v.sign() == Sign::Positive {
                bail!(Invariant, "term {j}: positive off-diagonal in a stoquastic decomposition");
            }
            if let Some(prev) = owner.insert((x, y), j) {
                bail!(Invariant, "entry ({x}, {y}) assigned to terms {prev} and {j}");
            }
            if h.query_entry(x, y)? != v {
                bail!(Invariant, "term {j} entry ({x}, {y}) = {v} differs from the instance");
            }
        }
    }
    if owner.len() != h.nnz() {
        bail!(Invariant, "terms cover {} entries, instance has {}", owner.len(), h.nnz());
    }
    Ok(())
}

/// Exact sum of entry-disjoint one-sparse terms. The declared sparsity of the
/// result is its realized maximum row count.
pub fn recompose(terms: &[OneSparseTerm], n: u32, ell: u32) -> Result<SparseHamiltonian> {
    let mut seen: BTreeMap<(u64, u64), FixedPoint> = BTreeMap::new();
    for (j, t) in terms.iter().enumerate() {
        if t.n != n || t.ell != ell {
            bail!(Argument, "term {j} has shape ({}, {}), expected ({n}, {ell})", t.n, t.ell);
        }
        for (x, y, v) in t.entries() {
            if x > y {
                continue;
            }
            if seen.insert((x, y), v).is_some() {
                bail!(Invariant, "entry ({x}, {y}) appears in more than one term");
            }
        }
    }
    let h = SparseHamiltonian::from_symmetric_entries(n, usize::MAX, ell, seen.into_iter().map(|((x, y), v)| (x, y, v)))?;
    let d = h.max_row_nnz();
    h.with_sparsity(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(v: i64, ell: u32) -> FixedPoint {
        FixedPoint::from_signed(v, ell).unwrap()
    }

    #[test]
    fn d1_decomposes_to_itself() {
        let h = SparseHamiltonian::from_symmetric_entries(2, 1, 4, [(0, 3, fp(-8, 4)), (1, 1, fp(-2, 4))]).unwrap();
        let terms = decompose_1sparse(&h).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(recompose(&terms, 2, 4).unwrap().rows(), h.rows());
    }

    #[test]
    fn zero_matrix_gives_padded_zero_terms() {
        let h = SparseHamiltonian::zero(3, 3, 8).unwrap();
        let terms = decompose_1sparse(&h).unwrap();
        assert_eq!(terms.len(), 9);
        assert!(terms.iter().all(OneSparseTerm::is_empty));
        let h0 = SparseHamiltonian::zero(2, 0, 8).unwrap();
        assert_eq!(decompose_1sparse(&h0).unwrap().len(), 1);
    }

    #[test]
    fn oracle_on_and_off_support() {
        let t = OneSparseTerm::from_pairs(3, 4, [(3, 5, fp(-4, 4))]).unwrap();
        assert_eq!(term_oracle(&t, 3), TermQuery { partner: 5, numerator: 4, present: true });
        assert_eq!(term_oracle(&t, 5), TermQuery { partner: 3, numerator: 4, present: true });
        assert_eq!(term_oracle(&t, 2), TermQuery { partner: 2, numerator: 0, present: false });
    }

    #[test]
    fn colliding_slot_pairs_fall_back() {
        // path 0 - 1 - 2 where row 1's slots produce the same (i, j) pair twice
        let h = SparseHamiltonian::from_symmetric_entries(
            2,
            2,
            4,
            [(0, 1, fp(-1, 4)), (1, 2, fp(-2, 4)), (2, 3, fp(-3, 4)), (0, 3, fp(-5, 4))],
        )
        .unwrap();
        let terms = decompose_1sparse(&h).unwrap();
        assert_eq!(terms.len(), 4);
        assert_eq!(recompose(&terms, 2, 4).unwrap().rows(), h.rows());
    }

    #[test]
    fn recompose_rejects_overlap() {
        let a = OneSparseTerm::from_pairs(2, 4, [(0, 1, fp(-1, 4))]).unwrap();
        assert!(recompose(&[a.clone(), a], 2, 4).is_err());
        assert_eq!(recompose(&[], 2, 4).unwrap().nnz(), 0);
    }

    #[test]
    fn insert_rejects_second_pair_on_row() {
        assert!(OneSparseTerm::from_pairs(2, 4, [(0, 1, fp(-1, 4)), (1, 2, fp(-1, 4))]).is_err());
    }
}
