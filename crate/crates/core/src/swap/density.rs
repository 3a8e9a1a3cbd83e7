use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{bail, Result};
use crate::statevector::{bit, Gate, ProjectorSpec, StateVector, Target};

const DENSITY_TOL: f64 = 1e-9;

/// Checks that `rho` is a real density matrix: square, symmetric, unit
/// trace and positive semidefinite.
pub fn validate_density(rho: &DMatrix<f64>) -> Result<()> {
    if !rho.is_square() || !rho.nrows().is_power_of_two() {
        bail!(Argument, "density matrix must be square with power-of-two size, got {}x{}", rho.nrows(), rho.ncols());
    }
    if (rho - rho.transpose()).amax() > DENSITY_TOL {
        bail!(Argument, "density matrix is not symmetric");
    }
    if (rho.trace() - 1.0).abs() > DENSITY_TOL {
        bail!(Argument, "density matrix has trace {}", rho.trace());
    }
    let min = SymmetricEigen::new(rho.clone()).eigenvalues.min();
    if min < -DENSITY_TOL {
        bail!(Argument, "density matrix has negative eigenvalue {min}");
    }
    Ok(())
}

/// `|psi><psi|`.
pub fn pure_density(psi: &StateVector) -> DMatrix<f64> {
    let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
    &v * v.transpose()
}

/// Reduced density matrix of `psi` on `keep` (in the listed order).
pub fn partial_trace(psi: &StateVector, keep: &[usize]) -> Result<DMatrix<f64>> {
    let m = psi.qubits();
    for (i, &q) in keep.iter().enumerate() {
        if q >= m || keep[..i].contains(&q) {
            bail!(Argument, "invalid kept qubit list {keep:?} for {m} qubits");
        }
    }
    let rest: Vec<usize> = (0..m).filter(|q| !keep.contains(q)).collect();
    let (dk, dr) = (1usize << keep.len(), 1usize << rest.len());
    // psi as a dk x dr matrix, rho = M M^T
    let mut mat = DMatrix::<f64>::zeros(dk, dr);
    for (idx, &a) in psi.amplitudes().iter().enumerate() {
        let i = keep.iter().fold(0usize, |acc, &q| (acc << 1) | bit(idx as u128, m, q) as usize);
        let j = rest.iter().fold(0usize, |acc, &q| (acc << 1) | bit(idx as u128, m, q) as usize);
        mat[(i, j)] = a;
    }
    Ok(&mat * mat.transpose())
}

/// Reduced density matrix of an `n`-qubit `rho` on `keep` (in the listed
/// order).
pub fn partial_trace_density(rho: &DMatrix<f64>, keep: &[usize]) -> Result<DMatrix<f64>> {
    if !rho.is_square() || !rho.nrows().is_power_of_two() {
        bail!(Argument, "density matrix must be square with power-of-two size");
    }
    let m = rho.nrows().trailing_zeros() as usize;
    for (i, &q) in keep.iter().enumerate() {
        if q >= m || keep[..i].contains(&q) {
            bail!(Argument, "invalid kept qubit list {keep:?} for {m} qubits");
        }
    }
    let rest: Vec<usize> = (0..m).filter(|q| !keep.contains(q)).collect();
    let split = |idx: usize| {
        let k = keep.iter().fold(0usize, |acc, &q| (acc << 1) | bit(idx as u128, m, q) as usize);
        let r = rest.iter().fold(0usize, |acc, &q| (acc << 1) | bit(idx as u128, m, q) as usize);
        (k, r)
    };
    let dim = rho.nrows();
    let parts: Vec<(usize, usize)> = (0..dim).map(split).collect();
    let mut out = DMatrix::zeros(1 << keep.len(), 1 << keep.len());
    for i in 0..dim {
        for j in 0..dim {
            if parts[i].1 == parts[j].1 {
                out[(parts[i].0, parts[j].0)] += rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Real density-matrix simulation of permutation circuits, used to check the
/// SWAP test on mixed inputs.
#[derive(Clone, Debug)]
pub struct DensityState {
    qubits: usize,
    rho: DMatrix<f64>,
}

impl DensityState {
    pub fn new(rho: DMatrix<f64>) -> Result<Self> {
        validate_density(&rho)?;
        let qubits = rho.nrows().trailing_zeros() as usize;
        if qubits > 12 {
            bail!(Resource, "density simulation is limited to 12 qubits");
        }
        Ok(Self { qubits, rho })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.rho
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::new(self.rho.kronecker(&other.rho))
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.qubits)?;
        let dim = self.rho.nrows();
        let perm: Vec<usize> = (0..dim).map(|i| gate.map_index(i as u128, self.qubits) as usize).collect();
        let mut out = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            for i in 0..dim {
                out[(perm[i], perm[j])] = self.rho[(i, j)];
            }
        }
        self.rho = out;
        Ok(())
    }

    /// `Tr(P rho)` for a product projector `P`.
    pub fn acceptance_probability(&self, proj: &ProjectorSpec) -> Result<f64> {
        proj.validate_for(self.qubits)?;
        let dim = self.rho.nrows();
        let m = self.qubits;
        let wires = proj.wires();
        let tmask: usize = wires.iter().map(|&w| 1usize << (m - 1 - w)).sum();
        let mut total = 0.0;
        for i in 0..dim {
            // j ranges over indices equal to i off the projector wires
            let base = i & !tmask;
            for sub in 0..(1usize << wires.len()) {
                let j = wires.iter().enumerate().fold(base, |acc, (b, &w)| {
                    acc | (((sub >> (wires.len() - 1 - b)) & 1) << (m - 1 - w))
                });
                let mut coef = 1.0;
                for t in &proj.targets {
                    let (bi, bj) = (bit(i as u128, m, t.wire), bit(j as u128, m, t.wire));
                    coef *= match t.target {
                        Target::Plus => 0.5,
                        Target::Zero => (!bi && !bj) as u8 as f64,
                        Target::One => (bi && bj) as u8 as f64,
                    };
                    if coef == 0.0 {
                        break;
                    }
                }
                if coef != 0.0 {
                    total += coef * self.rho[(j, i)];
                }
            }
        }
        Ok(total)
    }
}
