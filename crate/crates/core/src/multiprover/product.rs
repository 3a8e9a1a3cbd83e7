use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{bail, Result};
use crate::harness::random_unit_vector;
use crate::oracle::{real_state_grid, Bipartition};
use crate::statevector::{Gate, ProjectorSpec, ProjectorTarget, StateVector, Target};
use crate::swap::{partial_trace_density, pure_density, GeneralizedVerifier};

/// Consecutive registers of the given qubit counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    sizes: Vec<usize>,
}

impl Partition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            bail!(Argument, "partition needs at least one register and no empty registers");
        }
        Ok(Self { sizes })
    }

    /// Parses `"2,2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| crate::Error::Parse(format!("bad register size {t:?}"))))
            .collect::<Result<_>>()?;
        Self::new(sizes)
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn qubits(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Wires of register `i`.
    pub fn register(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.sizes[..i].iter().sum();
        start..start + self.sizes[i]
    }

    /// Wires of the registers selected by the bit mask `subset`.
    pub fn wires(&self, subset: usize) -> Vec<usize> {
        (0..self.k()).filter(|i| subset >> i & 1 == 1).flat_map(|i| self.register(i)).collect()
    }

    fn check(&self, qubits: usize) -> Result<()> {
        if qubits != self.qubits() {
            bail!(Argument, "state has {qubits} qubits, partition covers {}", self.qubits());
        }
        Ok(())
    }
}

/// `Tr(rho_S sigma_S)` for pure states: `||M_psi^T M_phi||_F^2` with the
/// states reshaped as (S | rest) matrices.
fn overlap_on(psi: &StateVector, phi: &StateVector, wires: &[usize]) -> Result<f64> {
    let m = psi.qubits();
    if wires.is_empty() {
        return Ok(1.0);
    }
    if wires.len() == m {
        let ip = psi.inner(phi);
        return Ok(ip * ip);
    }
    let part = Bipartition::new(m, wires)?;
    let a = part.reshape(psi.amplitudes());
    let b = part.reshape(phi.amplitudes());
    Ok((a.transpose() * b).norm_squared())
}

/// Product-test acceptance `2^-k sum_S Tr(rho_S sigma_S)` for pure inputs.
pub fn product_test(psi1: &StateVector, psi2: &StateVector, part: &Partition) -> Result<f64> {
    part.check(psi1.qubits())?;
    part.check(psi2.qubits())?;
    let k = part.k();
    let mut total = 0.0;
    for subset in 0..1usize << k {
        total += overlap_on(psi1, psi2, &part.wires(subset))?;
    }
    Ok(total / (1u64 << k) as f64)
}

/// Product-test acceptance for density-matrix inputs.
pub fn product_test_density(rho: &DMatrix<f64>, sigma: &DMatrix<f64>, part: &Partition) -> Result<f64> {
    if rho.shape() != sigma.shape() || rho.nrows() != 1 << part.qubits() {
        bail!(Argument, "density matrices must both act on {} qubits", part.qubits());
    }
    let k = part.k();
    let mut total = 0.0;
    for subset in 0..1usize << k {
        let wires = part.wires(subset);
        total += if wires.is_empty() {
            1.0
        } else {
            let r = partial_trace_density(rho, &wires)?;
            let s = partial_trace_density(sigma, &wires)?;
            r.component_mul(&s.transpose()).sum()
        };
    }
    Ok(total / (1u64 << k) as f64)
}

/// Product-test acceptance by simulating `k` controlled-SWAP tests on
/// `|+>^k ⊗ psi1 ⊗ psi2`.
pub fn product_test_circuit(psi1: &StateVector, psi2: &StateVector, part: &Partition) -> Result<f64> {
    part.check(psi1.qubits())?;
    part.check(psi2.qubits())?;
    let (k, n) = (part.k(), part.qubits());
    let mut state = StateVector::plus(k)?.tensor(psi1)?.tensor(psi2)?;
    let mut gates = Vec::new();
    for i in 0..k {
        for w in part.register(i) {
            gates.push(Gate::fredkin(i, k + w, k + n + w));
        }
    }
    state.run(&gates)?;
    let proj = ProjectorSpec::new((0..k).map(|wire| ProjectorTarget { wire, target: Target::Plus }).collect())?;
    state.acceptance_probability(&proj)
}

/// Same as [`product_test`] on the pure states' density matrices, for
/// cross-checks.
pub fn product_test_pure_density(psi1: &StateVector, psi2: &StateVector, part: &Partition) -> Result<f64> {
    product_test_density(&pure_density(psi1), &pure_density(psi2), part)
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapResult {
    /// `1 - eps`, the best squared overlap with a product state found.
    pub overlap: f64,
    pub eps: f64,
    /// One unit vector per register.
    pub factors: Vec<Vec<f64>>,
    /// True when the value is only a lower bound (three or more registers).
    pub heuristic: bool,
}

/// Contracts `psi` with every factor except register `skip`, giving the
/// (unnormalized) optimal factor for that register.
fn contract_except(psi: &[f64], part: &Partition, factors: &[Vec<f64>], skip: usize) -> Vec<f64> {
    let n = part.qubits();
    let ranges: Vec<_> = (0..part.k()).map(|i| part.register(i)).collect();
    let mut out = vec![0.0; 1 << part.sizes()[skip]];
    for (idx, &a) in psi.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let mut coef = a;
        let mut own = 0;
        for (i, r) in ranges.iter().enumerate() {
            let local = (idx >> (n - r.end)) & ((1 << r.len()) - 1);
            if i == skip {
                own = local;
            } else {
                coef *= factors[i][local];
                if coef == 0.0 {
                    break;
                }
            }
        }
        out[own] += coef;
    }
    out
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|a| *a /= n);
    }
    n
}

const OVERLAP_RESTARTS: usize = 20;
const OVERLAP_MAX_ITERS: usize = 500;

/// Largest squared overlap of `psi` with a product state across the
/// partition: exact (top singular value) for two registers, alternating
/// maximization with seeded restarts otherwise.
pub fn max_product_overlap(psi: &StateVector, part: &Partition, seed: u64) -> Result<OverlapResult> {
    part.check(psi.qubits())?;
    let k = part.k();
    if k == 1 {
        return Ok(OverlapResult { overlap: 1.0, eps: 0.0, factors: vec![psi.amplitudes().to_vec()], heuristic: false });
    }
    if k == 2 {
        let wires: Vec<usize> = part.register(0).collect();
        let bp = Bipartition::new(psi.qubits(), &wires)?;
        let svd = bp.reshape(psi.amplitudes()).svd(true, true);
        let (i, &s) = svd
            .singular_values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty");
        let u = svd.u.as_ref().expect("requested").column(i).iter().copied().collect();
        let v = svd.v_t.as_ref().expect("requested").row(i).iter().copied().collect();
        let overlap = (s * s).min(1.0);
        return Ok(OverlapResult { overlap, eps: 1.0 - overlap, factors: vec![u, v], heuristic: false });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = psi.amplitudes();
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    for r in 0..OVERLAP_RESTARTS {
        let mut factors: Vec<Vec<f64>> =
            part.sizes().iter().map(|&s| random_unit_vector(1 << s, r % 2 == 1, &mut rng)).collect();
        let mut value = 0.0f64;
        for _ in 0..OVERLAP_MAX_ITERS {
            let mut last = 0.0;
            for i in 0..k {
                let mut f = contract_except(amps, part, &factors, i);
                last = normalize(&mut f);
                if last > 0.0 {
                    factors[i] = f;
                }
            }
            let v = last * last;
            if v < value - 1e-12 {
                bail!(Invariant, "alternating overlap maximization decreased ({value} -> {v})");
            }
            let done = v - value < 1e-14;
            value = value.max(v);
            if done {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| value > b.0 + 1e-15) {
            best = Some((value, factors));
        }
    }
    let (overlap, factors) = best.expect("restarts ran");
    Ok(OverlapResult { overlap, eps: 1.0 - overlap, factors, heuristic: true })
}

/// Grid search over real product states: every register but the last runs
/// over [`real_state_grid`], the last is optimized exactly. Registers must
/// have one or two qubits.
pub fn grid_product_overlap(psi: &StateVector, part: &Partition, resolution: f64) -> Result<f64> {
    part.check(psi.qubits())?;
    let k = part.k();
    if k < 2 {
        return Ok(1.0);
    }
    let grids: Vec<Vec<Vec<f64>>> =
        part.sizes()[..k - 1].iter().map(|&s| real_state_grid(s, resolution)).collect::<Result<_>>()?;
    let mut best = 0.0f64;
    let mut counter = vec![0usize; k - 1];
    let mut factors: Vec<Vec<f64>> = part.sizes().iter().map(|&s| vec![0.0; 1 << s]).collect();
    'outer: loop {
        for i in 0..k - 1 {
            factors[i].clone_from(&grids[i][counter[i]]);
        }
        let mut f = contract_except(psi.amplitudes(), part, &factors, k - 1);
        let nrm = normalize(&mut f);
        best = best.max(nrm * nrm);
        for i in (0..k - 1).rev() {
            counter[i] += 1;
            if counter[i] < grids[i].len() {
                continue 'outer;
            }
            counter[i] = 0;
        }
        break;
    }
    Ok(best)
}

/// Two-prover simulation of a multi-register verifier `base`: with
/// probability 1/2 run the product test on the two states, otherwise run
/// `base` on one of them chosen uniformly.
pub fn simulate_k_to_2(
    base: &GeneralizedVerifier,
    psi1: &StateVector,
    psi2: &StateVector,
    part: &Partition,
) -> Result<f64> {
    let l = base.circuit.layout;
    if l.input != 0 || l.witness != part.qubits() {
        bail!(Argument, "base verifier must take no input and a {}-qubit witness", part.qubits());
    }
    let pt = product_test(psi1, psi2, part)?;
    let a1 = base.circuit.acceptance(&[], psi1, &base.projector)?;
    let a2 = base.circuit.acceptance(&[], psi2, &base.projector)?;
    Ok(0.5 * pt + 0.25 * (a1 + a2))
}
