//! Small base verifiers and prover-state families for protocol checks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Partition;
use crate::error::Result;
use crate::harness::{random_state, random_unit_vector};
use crate::statevector::{CircuitSpec, Gate, ProjectorSpec, ProjectorTarget, StateVector, Target, WireLayout};
use crate::swap::GeneralizedVerifier;

/// Accepts with probability `|<GHZ_n|psi>|^2` on an `n`-qubit witness (the
/// Bell projector for `n = 2`): CNOTs fan the first qubit out, then wire 0 is
/// projected on `|+>` and the others on `|0>`.
pub fn cat_projector_verifier(n: usize) -> Result<GeneralizedVerifier> {
    let layout = WireLayout { input: 0, witness: n, zero: 0, plus: 0 };
    let gates = (1..n).map(|t| Gate::cnot(0, t)).collect();
    let mut targets = vec![ProjectorTarget { wire: 0, target: Target::Plus }];
    targets.extend((1..n).map(|wire| ProjectorTarget { wire, target: Target::Zero }));
    GeneralizedVerifier::new(CircuitSpec::new(layout, gates)?, ProjectorSpec::new(targets)?)
}

/// `(|0...0> + |1...1>)/sqrt(2)`.
pub fn cat_state(n: usize) -> Result<StateVector> {
    let mut v = vec![0.0; 1 << n];
    v[0] = std::f64::consts::FRAC_1_SQRT_2;
    v[(1 << n) - 1] = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_amplitudes(n, v)
}

/// Tensor product of random unit vectors on the registers.
pub fn random_product_state(part: &Partition, signed: bool, rng: &mut ChaCha8Rng) -> Result<StateVector> {
    let mut s = StateVector::basis(0, 0)?;
    for &size in part.sizes() {
        let f = StateVector::from_amplitudes(size, random_unit_vector(1 << size, signed, rng))?;
        s = s.tensor(&f)?;
    }
    Ok(s)
}

/// Discretized prover-state family: computational basis states, the pairs
/// `(|x> ± |~x>)/sqrt(2)` (eigenvectors of the cat projector), random product
/// states, random entangled states, and rotations between the cat state and
/// `|0...0>`.
pub fn adversary_family(part: &Partition, seed: u64) -> Result<Vec<StateVector>> {
    let n = part.qubits();
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for x in 0..dim {
        out.push(StateVector::basis(n, x as u128)?);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for x in 0..dim / 2 {
        let y = !x & (dim - 1);
        for sign in [1.0, -1.0] {
            let mut v = vec![0.0; dim];
            v[x] = h;
            v[y] = sign * h;
            out.push(StateVector::from_amplitudes(n, v)?);
        }
    }
    for i in 0..16 {
        out.push(random_product_state(part, i % 2 == 1, &mut rng)?);
        out.push(random_state(n, i % 2 == 1, &mut rng)?);
    }
    let cat = cat_state(n)?;
    for i in 1..10 {
        let t = i as f64 * std::f64::consts::FRAC_PI_2 / 10.0;
        let mut v: Vec<f64> = cat.amplitudes().iter().map(|a| a * t.cos()).collect();
        v[0] += t.sin();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
        out.push(StateVector::from_amplitudes(n, v)?);
    }
    Ok(out)
}
