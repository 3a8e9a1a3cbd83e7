//! Independent dense ground truth: spectra, sign-fixed ground vectors and
//! best product states.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{bail, Result};
use crate::hamiltonian::SparseHamiltonian;
use crate::harness::random_unit_vector;
use crate::verifier::term_count;

/// Largest dimension handled by the dense eigensolver.
pub const MAX_DENSE_DIM: usize = 1 << 12;
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct SpectralResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` belongs to `eigenvalues[i]`.
    pub eigenvectors: DMatrix<f64>,
    /// A ground vector; entrywise nonnegative when `ground_nonnegative`.
    pub ground: Vec<f64>,
    pub ground_nonnegative: bool,
}

impl SpectralResult {
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }
}

fn check_symmetric(h: &DMatrix<f64>) -> Result<()> {
    if !h.is_square() {
        bail!(Argument, "matrix must be square");
    }
    if h.nrows() > MAX_DENSE_DIM {
        bail!(Resource, "dimension {} exceeds the dense cap {MAX_DENSE_DIM}", h.nrows());
    }
    if h.nrows() == 0 {
        bail!(Argument, "empty matrix");
    }
    if (h - h.transpose()).amax() > 1e-12 {
        bail!(Argument, "matrix is not symmetric");
    }
    Ok(())
}

fn sorted_eigen(h: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), h.nrows(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Connected components of the off-diagonal nonzero graph, each sorted, in
/// order of smallest member.
pub fn components(h: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = h.nrows();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![start];
        let mut members = vec![];
        comp[start] = id;
        while let Some(x) = stack.pop() {
            members.push(x);
            for y in 0..n {
                if y != x && h[(x, y)] != 0.0 && comp[y] == usize::MAX {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

fn is_stoquastic_dense(h: &DMatrix<f64>) -> bool {
    (0..h.nrows()).all(|i| (0..h.ncols()).all(|j| i == j || h[(i, j)] <= 0.0))
}

/// Full spectrum with residual certificate. For stoquastic input the ground
/// vector is the Perron–Frobenius vector of the lowest-energy connected
/// block (ties to the block with the lowest row index), made nonnegative.
pub fn exact_spectrum(h: &DMatrix<f64>) -> Result<SpectralResult> {
    check_symmetric(h)?;
    let (eigenvalues, eigenvectors) = sorted_eigen(h);
    for (i, &l) in eigenvalues.iter().enumerate() {
        let v = eigenvectors.column(i);
        let r = (h * v - v * l).norm();
        if r > RESIDUAL_TOL {
            bail!(Invariant, "eigenpair {i} has residual {r}");
        }
    }
    let (ground, nonneg) = if is_stoquastic_dense(h) {
        (perron_ground(h, eigenvalues[0])?, true)
    } else {
        (eigenvectors.column(0).iter().copied().collect(), false)
    };
    Ok(SpectralResult { eigenvalues, eigenvectors, ground, ground_nonnegative: nonneg })
}

fn perron_ground(h: &DMatrix<f64>, lambda_min: f64) -> Result<Vec<f64>> {
    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
    for members in components(h) {
        let block = DMatrix::from_fn(members.len(), members.len(), |a, b| h[(members[a], members[b])]);
        let (vals, vecs) = sorted_eigen(&block);
        let better = match &best {
            None => true,
            Some((e, _, _)) => vals[0] < *e - 1e-12,
        };
        if better {
            best = Some((vals[0], members, vecs.column(0).iter().map(|a| a.abs()).collect()));
        }
    }
    let (e, members, v) = best.expect("at least one component");
    if (e - lambda_min).abs() > 1e-9 {
        bail!(Invariant, "block minimum {e} differs from spectrum minimum {lambda_min}");
    }
    let mut ground = vec![0.0; h.nrows()];
    for (&i, a) in members.iter().zip(v) {
        ground[i] = a;
    }
    Ok(ground)
}

pub fn exact_spectrum_sparse(h: &SparseHamiltonian) -> Result<SpectralResult> {
    if h.dim() as usize > MAX_DENSE_DIM {
        bail!(Resource, "dimension {} exceeds the dense cap {MAX_DENSE_DIM}", h.dim());
    }
    exact_spectrum(&h.to_dense())
}

/// `1/2 - lambda_min / (4 d^2)` for a shifted instance: the best acceptance of
/// the combined verifier over all witnesses.
pub fn max_acceptance_over_witnesses(h: &SparseHamiltonian) -> Result<f64> {
    let s = exact_spectrum_sparse(h)?;
    Ok(0.5 - s.lambda_min() / (4.0 * term_count(h) as f64))
}

/// Index bookkeeping for an A|B split of `qubits` wires: `index[a][b]` is the
/// full basis index with A bits `a` and B bits `b` (both big-endian in the
/// listed wire order).
#[derive(Clone, Debug)]
pub struct Bipartition {
    pub qubits: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    dim: usize,
    index: Vec<Vec<usize>>,
}

impl Bipartition {
    pub fn new(qubits: usize, a: &[usize]) -> Result<Self> {
        for (i, &q) in a.iter().enumerate() {
            if q >= qubits || a[..i].contains(&q) {
                bail!(Argument, "invalid party {a:?} for {qubits} qubits");
            }
        }
        if a.is_empty() || a.len() == qubits {
            bail!(Argument, "both parties must be non-empty");
        }
        let b: Vec<usize> = (0..qubits).filter(|q| !a.contains(q)).collect();
        let place = |wires: &[usize], v: usize| {
            wires.iter().enumerate().fold(0usize, |acc, (i, &q)| {
                acc | (((v >> (wires.len() - 1 - i)) & 1) << (qubits - 1 - q))
            })
        };
        let index = (0..1usize << a.len())
            .map(|va| (0..1usize << b.len()).map(|vb| place(a, va) | place(&b, vb)).collect())
            .collect();
        Ok(Self { qubits, a: a.to_vec(), b, dim: 1 << qubits, index })
    }

    /// Split of a `dim_a * dim_b` space with index `i * dim_b + k`, for
    /// registers that are not qubits (a clock, say). `qubits`, `a` and `b`
    /// are left empty.
    pub fn blocks(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a < 2 || dim_b < 2 {
            bail!(Argument, "both parties need dimension at least 2");
        }
        let index = (0..dim_a).map(|i| (0..dim_b).map(|k| i * dim_b + k).collect()).collect();
        Ok(Self { qubits: 0, a: vec![], b: vec![], dim: dim_a * dim_b, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dim_a(&self) -> usize {
        self.index.len()
    }

    pub fn dim_b(&self) -> usize {
        self.index[0].len()
    }

    /// Full vector of `chi_a ⊗ chi_b`.
    pub fn product(&self, chi_a: &[f64], chi_b: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for (ia, &x) in chi_a.iter().enumerate() {
            for (ib, &y) in chi_b.iter().enumerate() {
                v[self.index[ia][ib]] = x * y;
            }
        }
        v
    }

    /// Effective matrix on A with B fixed to `chi_b`.
    pub fn reduce_to_a(&self, h: &DMatrix<f64>, chi_b: &[f64]) -> DMatrix<f64> {
        let (da, db) = (self.dim_a(), self.dim_b());
        DMatrix::from_fn(da, da, |i, j| {
            let mut s = 0.0;
            for k in 0..db {
                if chi_b[k] == 0.0 {
                    continue;
                }
                for l in 0..db {
                    s += chi_b[k] * h[(self.index[i][k], self.index[j][l])] * chi_b[l];
                }
            }
            s
        })
    }

    /// Effective matrix on B with A fixed to `chi_a`.
    pub fn reduce_to_b(&self, h: &DMatrix<f64>, chi_a: &[f64]) -> DMatrix<f64> {
        let (da, db) = (self.dim_a(), self.dim_b());
        DMatrix::from_fn(db, db, |k, l| {
            let mut s = 0.0;
            for i in 0..da {
                if chi_a[i] == 0.0 {
                    continue;
                }
                for j in 0..da {
                    s += chi_a[i] * h[(self.index[i][k], self.index[j][l])] * chi_a[j];
                }
            }
            s
        })
    }

    /// `psi` reshaped as a `dim_a x dim_b` matrix.
    pub fn reshape(&self, psi: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim_a(), self.dim_b(), |i, k| psi[self.index[i][k]])
    }
}

fn lowest(h: &DMatrix<f64>) -> (f64, Vec<f64>) {
    let (vals, vecs) = sorted_eigen(h);
    (vals[0], vecs.column(0).iter().copied().collect())
}

fn energy(h: &DMatrix<f64>, v: &[f64]) -> f64 {
    let v = DVector::from_column_slice(v);
    v.dot(&(h * &v))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductResult {
    pub energy: f64,
    pub chi_a: Vec<f64>,
    pub chi_b: Vec<f64>,
    /// Always true: alternating minimization gives an upper bound on the best
    /// product energy, not a certificate.
    pub heuristic: bool,
    pub restarts: usize,
    pub iterations: usize,
}

pub const PRODUCT_RESTARTS: usize = 20;
pub const PRODUCT_MAX_ITERS: usize = 500;

/// Minimum of `<a⊗b|H|a⊗b>` by alternating exact minimization over one party,
/// over seeded restarts (nonnegative random, signed random and the
/// computational basis state of B with lowest diagonal energy).
pub fn optimal_product_state(h: &DMatrix<f64>, part: &Bipartition, seed: u64) -> Result<ProductResult> {
    check_symmetric(h)?;
    if h.nrows() != part.dim {
        bail!(Argument, "matrix dimension {} does not match the partition ({})", h.nrows(), part.dim);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let db = part.dim_b();
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(PRODUCT_RESTARTS + 1);
    for r in 0..PRODUCT_RESTARTS {
        starts.push(random_unit_vector(db, r % 2 == 1, &mut rng));
    }
    let diag_best = (0..db)
        .min_by(|&x, &y| {
            let ex = (0..part.dim_a()).map(|i| h[(part.index[i][x], part.index[i][x])]).fold(f64::INFINITY, f64::min);
            let ey = (0..part.dim_a()).map(|i| h[(part.index[i][y], part.index[i][y])]).fold(f64::INFINITY, f64::min);
            ex.total_cmp(&ey)
        })
        .unwrap_or(0);
    let mut e_basis = vec![0.0; db];
    e_basis[diag_best] = 1.0;
    starts.push(e_basis);

    let mut best: Option<ProductResult> = None;
    let mut total_iters = 0;
    for chi_b0 in starts {
        let mut chi_b = chi_b0;
        let (mut e, mut chi_a) = lowest(&part.reduce_to_a(h, &chi_b));
        for _ in 0..PRODUCT_MAX_ITERS {
            total_iters += 1;
            let (e_b, new_b) = lowest(&part.reduce_to_b(h, &chi_a));
            let (e_a, new_a) = lowest(&part.reduce_to_a(h, &new_b));
            if e_b > e + 1e-12 || e_a > e_b + 1e-12 {
                bail!(Invariant, "alternating minimization increased the energy ({e} -> {e_b} -> {e_a})");
            }
            chi_b = new_b;
            chi_a = new_a;
            let done = e - e_a < 1e-12;
            e = e_a;
            if done {
                break;
            }
        }
        let e = energy(h, &part.product(&chi_a, &chi_b));
        if best.as_ref().is_none_or(|b| e < b.energy - 1e-15) {
            best = Some(ProductResult {
                energy: e,
                chi_a: chi_a.clone(),
                chi_b: chi_b.clone(),
                heuristic: true,
                restarts: PRODUCT_RESTARTS + 1,
                iterations: 0,
            });
        }
    }
    let mut best = best.expect("at least one restart");
    best.iterations = total_iters;
    Ok(best)
}

/// Real unit vectors on `qubits <= 2` wires on a hyperspherical angle grid
/// with spacing `resolution` (angles in `[0, pi]`, last one in `[0, 2 pi)`
/// for two qubits; one angle in `[0, pi)` suffices up to sign for one qubit).
pub fn real_state_grid(qubits: usize, resolution: f64) -> Result<Vec<Vec<f64>>> {
    use std::f64::consts::PI;
    if resolution <= 0.0 {
        bail!(Argument, "resolution must be positive");
    }
    let steps = |range: f64| (range / resolution).ceil() as usize;
    match qubits {
        1 => Ok((0..steps(PI)).map(|i| {
            let t = i as f64 * resolution;
            vec![t.cos(), t.sin()]
        })
        .collect()),
        2 => {
            let mut out = Vec::new();
            for i in 0..=steps(PI) {
                let a = (i as f64 * resolution).min(PI);
                for j in 0..=steps(PI) {
                    let b = (j as f64 * resolution).min(PI);
                    for k in 0..steps(PI) {
                        // third angle over [0, pi) suffices up to global sign
                        let c = k as f64 * resolution;
                        out.push(vec![
                            a.cos(),
                            a.sin() * b.cos(),
                            a.sin() * b.sin() * c.cos(),
                            a.sin() * b.sin() * c.sin(),
                        ]);
                    }
                }
            }
            Ok(out)
        }
        _ => bail!(Argument, "grid search supports one or two qubits per party"),
    }
}

/// Grid over party A (dimension 2 or 4) with exact minimization over B.
pub fn grid_product_energy(h: &DMatrix<f64>, part: &Bipartition, resolution: f64) -> Result<f64> {
    check_symmetric(h)?;
    if h.nrows() != part.dim {
        bail!(Argument, "matrix dimension {} does not match the partition ({})", h.nrows(), part.dim);
    }
    let qubits = match part.dim_a() {
        2 => 1,
        4 => 2,
        d => bail!(Argument, "grid search needs party A of dimension 2 or 4, got {d}"),
    };
    let grid = real_state_grid(qubits, resolution)?;
    let mut best = f64::INFINITY;
    for chi_a in grid {
        let (e, _) = lowest(&part.reduce_to_b(h, &chi_a));
        best = best.min(e);
    }
    Ok(best)
}
