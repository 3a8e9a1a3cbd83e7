use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::harness::{random_density, random_generalized_verifier, random_state};
use crate::statevector::{CircuitSpec, StateVector, WireLayout};
use crate::verifier::rational;

#[test]
fn swap_test_pure_cases() {
    let a = StateVector::basis(1, 0).unwrap();
    let b = StateVector::basis(1, 1).unwrap();
    let (ra, rb) = (pure_density(&a), pure_density(&b));
    assert!((swap_test_accept(&ra, &ra).unwrap() - 1.0).abs() < 1e-15);
    assert!((swap_test_accept(&ra, &rb).unwrap() - 0.5).abs() < 1e-15);
    assert!(swap_test_accept(&ra, &pure_density(&StateVector::basis(2, 0).unwrap())).is_err());
}

#[test]
fn swap_test_formula_matches_circuit() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=3 {
        for rank in [1, 2, 4] {
            let rho = random_density(n, rank, &mut rng);
            let sigma = random_density(n, rank, &mut rng);
            let f = swap_test_accept(&rho, &sigma).unwrap();
            let c = swap_test_circuit_accept(&rho, &sigma).unwrap();
            assert!((f - c).abs() < 1e-12, "{f} vs {c}");
            assert!((0.5..=1.0).contains(&f));
        }
    }
}

#[test]
fn partial_trace_of_bell_is_maximally_mixed() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = StateVector::from_amplitudes(2, vec![h, 0.0, 0.0, h]).unwrap();
    let r = partial_trace(&bell, &[0]).unwrap();
    assert!((r - DMatrix::identity(2, 2) * 0.5).amax() < 1e-15);
}

#[test]
fn partial_trace_respects_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let psi = random_state(3, true, &mut rng).unwrap();
    let r01 = partial_trace(&psi, &[0, 1]).unwrap();
    let r10 = partial_trace(&psi, &[1, 0]).unwrap();
    let perm = [0usize, 2, 1, 3];
    for i in 0..4 {
        for j in 0..4 {
            assert!((r01[(i, j)] - r10[(perm[i], perm[j])]).abs() < 1e-15);
        }
    }
    assert!((r01.trace() - 1.0).abs() < 1e-12);
}

#[test]
fn route_identity_and_single_swap() {
    let p = ProjectorSpec::leading(&[Target::Plus, Target::Zero]).unwrap();
    let (g, q) = route_to_front(&p, 4).unwrap();
    assert!(g.is_empty());
    assert_eq!(q, p);
    let p = ProjectorSpec::new(vec![ProjectorTarget { wire: 2, target: Target::Plus }]).unwrap();
    let (g, _) = route_to_front(&p, 4).unwrap();
    assert_eq!(g.len(), 3);
    assert!(g.iter().all(|g| matches!(g, Gate::Cnot { .. })));
}

#[test]
fn routing_preserves_acceptance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let psi = random_state(6, true, &mut rng).unwrap();
        let mut wires: Vec<usize> = (0..6).collect();
        rand::seq::SliceRandom::shuffle(&mut wires[..], &mut rng);
        let targets = [Target::Plus, Target::Zero, Target::One, Target::Plus, Target::Plus, Target::Zero];
        let p = ProjectorSpec::new(
            wires.iter().zip(targets).map(|(&wire, target)| ProjectorTarget { wire, target }).collect(),
        )
        .unwrap();
        let before = psi.acceptance_probability(&p).unwrap();
        let (g, q) = route_to_front(&p, 6).unwrap();
        let mut moved = psi.clone();
        moved.run(&g).unwrap();
        let after = moved.acceptance_probability(&q).unwrap();
        assert!((before - after).abs() < 1e-12);
    }
}

#[test]
fn always_and_never_accepting() {
    let layout = WireLayout { input: 0, witness: 1, zero: 1, plus: 2 };
    let c = CircuitSpec::new(layout, vec![]).unwrap();
    let w = StateVector::basis(1, 1).unwrap();
    let always = GeneralizedVerifier::new(
        c.clone(),
        ProjectorSpec::new(vec![
            ProjectorTarget { wire: 2, target: Target::Plus },
            ProjectorTarget { wire: 3, target: Target::Plus },
        ])
        .unwrap(),
    )
    .unwrap();
    let s = compile_generalized(&always).unwrap();
    assert!(s.is_legal());
    assert!((s.circuit.acceptance(&[], &w, &s.projector).unwrap() - 1.0).abs() < 1e-12);
    let never = GeneralizedVerifier::new(
        c,
        ProjectorSpec::new(vec![
            ProjectorTarget { wire: 2, target: Target::Plus },
            ProjectorTarget { wire: 1, target: Target::One },
        ])
        .unwrap(),
    )
    .unwrap();
    let s = compile_generalized(&never).unwrap();
    assert!((s.circuit.acceptance(&[], &w, &s.projector).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn affine_law_on_random_verifiers() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let (vg, x) = random_generalized_verifier(&mut rng).unwrap();
        let w = random_state(vg.circuit.layout.witness, true, &mut rng).unwrap();
        let p = vg.circuit.acceptance(&x, &w, &vg.projector).unwrap();
        let s = compile_generalized(&vg).unwrap();
        assert!(s.is_legal());
        let q = s.circuit.acceptance(&x, &w, &s.projector).unwrap();
        assert!((q - (0.5 + 0.5 * p)).abs() < 1e-12, "{q} vs {p}");
        let text = s.circuit.to_text();
        assert_eq!(text, compile_generalized(&vg).unwrap().circuit.to_text());
    }
}

#[test]
fn thresholds_transport_exactly() {
    let (a, b) = transport_thresholds(&rational(13, 16), &rational(25, 32));
    assert_eq!(a, rational(29, 32));
    assert_eq!(b, rational(57, 64));
    assert_eq!(&a - &b, rational(1, 64));
}
