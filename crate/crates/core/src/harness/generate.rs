use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{bail, Result};
use crate::fixed::FixedPoint;
use crate::hamiltonian::{SparseHamiltonian, MAX_STORED_QUBITS};

/// Random stoquastic instance with `0 <= H <= I`, at most `d` nonzeros per row
/// (diagonal included) and even numerators, so that `normalize_shift` is exact
/// and keeps the sparsity bound.
///
/// The off-diagonal pattern is a union of `d - 1` random partial matchings;
/// each diagonal entry is the row's off-diagonal mass plus a random offset, so
/// every Gershgorin disc lies inside `[0, 1]`.
pub fn gen_random_instance(n: u32, d: usize, ell: u32, seed: u64) -> Result<SparseHamiltonian> {
    gen_random_instance_with_headroom(n, d, ell, 0, seed)
}

/// As [`gen_random_instance`] but with `H <= (1 - headroom / 2^ell) I`, so a
/// diagonal shift by `headroom` keeps `H <= I`. `headroom` must be even and
/// below `2^ell`.
pub fn gen_random_instance_with_headroom(n: u32, d: usize, ell: u32, headroom: i64, seed: u64) -> Result<SparseHamiltonian> {
    if n == 0 || n > MAX_STORED_QUBITS {
        bail!(Argument, "n = {n} outside 1..={MAX_STORED_QUBITS}");
    }
    let dim = 1u64 << n;
    if d == 0 || d as u64 > dim {
        bail!(Argument, "sparsity d = {d} must lie in 1..=2^n = {dim}");
    }
    if !(2..=40).contains(&ell) {
        bail!(Precision, "generator precision must lie in 2..=40, got {ell}");
    }
    let one = 1i64 << ell;
    if headroom < 0 || headroom % 2 != 0 || headroom >= one {
        bail!(Argument, "headroom {headroom} must be even and in 0..2^ell");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = one - headroom;
    let off_degree = d - 1;
    // largest even numerator with off_degree * w <= top / 2
    let w_max = if off_degree == 0 { 0 } else { ((top / 2) / off_degree as i64) & !1 };

    let mut edges: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut verts: Vec<u64> = (0..dim).collect();
    for _ in 0..off_degree {
        verts.shuffle(&mut rng);
        for pair in verts.chunks_exact(2) {
            let (x, y) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if rng.random_bool(0.75) {
                edges.insert((x, y));
            }
        }
    }
    let mut entries = Vec::with_capacity(edges.len() + dim as usize);
    let mut mass = vec![0i64; dim as usize];
    for &(x, y) in &edges {
        let w = if w_max < 2 { 0 } else { 2 * rng.random_range(1..=w_max / 2) };
        if w == 0 {
            continue;
        }
        mass[x as usize] += w;
        mass[y as usize] += w;
        entries.push((x, y, FixedPoint::from_signed(-w, ell)?));
    }
    for x in 0..dim {
        let m = mass[x as usize];
        let room = (top - 2 * m) / 2;
        let u = 2 * rng.random_range(0..=room);
        entries.push((x, x, FixedPoint::from_signed(m + u, ell)?));
    }
    SparseHamiltonian::from_symmetric_entries(n, d, ell, entries)
}

/// A term acting on at most three qubits, given as a dense real matrix in the
/// big-endian basis of `qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalTerm {
    pub qubits: Vec<usize>,
    pub matrix: Vec<Vec<f64>>,
}

/// Embeds a sum of local terms on `n` qubits as a sparse instance with
/// sparsity bound `2^k * m`. Every term must be stoquastic and every summed
/// entry exactly representable with `ell` bits.
pub fn gen_local_embedded(n: u32, ell: u32, terms: &[LocalTerm]) -> Result<SparseHamiltonian> {
    if n == 0 || n > 12 {
        bail!(Argument, "local embedding supports 1..=12 qubits, got {n}");
    }
    let dim = 1usize << n;
    let mut dense = vec![std::collections::BTreeMap::<usize, f64>::new(); dim];
    let mut k_max = 0usize;
    for (ti, t) in terms.iter().enumerate() {
        let k = t.qubits.len();
        if k == 0 || k > 3 {
            bail!(Argument, "term {ti} acts on {k} qubits; 1..=3 supported");
        }
        k_max = k_max.max(k);
        for (i, &q) in t.qubits.iter().enumerate() {
            if q >= n as usize || t.qubits[..i].contains(&q) {
                bail!(Argument, "term {ti} has invalid qubit list {:?}", t.qubits);
            }
        }
        let kd = 1usize << k;
        if t.matrix.len() != kd || t.matrix.iter().any(|r| r.len() != kd) {
            bail!(Argument, "term {ti} matrix must be {kd}x{kd}");
        }
        for a in 0..kd {
            for b in 0..kd {
                if t.matrix[a][b] != t.matrix[b][a] {
                    bail!(Argument, "term {ti} is not symmetric");
                }
                if a != b && t.matrix[a][b] > 0.0 {
                    bail!(Convention, "term {ti} has a positive off-diagonal entry; not stoquastic");
                }
            }
        }
        let shift = |q: usize| n as usize - 1 - q;
        let local = |x: usize| t.qubits.iter().fold(0usize, |acc, &q| (acc << 1) | ((x >> shift(q)) & 1));
        let mask: usize = t.qubits.iter().map(|&q| 1usize << shift(q)).sum();
        for (x, row) in dense.iter_mut().enumerate() {
            let a = local(x);
            for b in 0..kd {
                let v = t.matrix[a][b];
                if v == 0.0 {
                    continue;
                }
                let y = t.qubits.iter().enumerate().fold(x & !mask, |acc, (i, &q)| {
                    acc | (((b >> (k - 1 - i)) & 1) << shift(q))
                });
                *row.entry(y).or_insert(0.0) += v;
            }
        }
    }
    let mut entries = Vec::new();
    for (x, row) in dense.iter().enumerate() {
        for (&y, &v) in row.range(x..) {
            if v != 0.0 {
                entries.push((x as u64, y as u64, FixedPoint::from_f64_exact(v, ell)?));
            }
        }
    }
    let d = (1usize << k_max) * terms.len();
    SparseHamiltonian::from_symmetric_entries(n, d.max(1), ell, entries)
}
