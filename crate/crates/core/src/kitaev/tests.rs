use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::harness::{random_state, random_unit_vector};
use crate::oracle::Bipartition;
use crate::statevector::{Gate, ProjectorSpec, StateVector};
use crate::verifier::{rational, to_f64};

fn proof(theta: f64) -> StateVector {
    StateVector::from_amplitudes(1, vec![theta.cos(), theta.sin()]).unwrap()
}

fn big_delta(v: &ToyVerifier) -> f64 {
    let (gap, _) = spectral_gap(&(h_init(v) + h_prop(v)), v.steps()).unwrap();
    gap.lambda_2 / 10.0
}

#[test]
fn hardness_parameters() {
    let p = hardness_params(&rational(1, 1), &rational(3, 4), 3).unwrap();
    assert_eq!(p.alpha, rational(1, 262144));
    // c = 1: denominator (c - s)/4
    assert_eq!(p.delta_over_c, rational(1, 262144) / (rational(1, 16) * rational(16, 1)));
    let a1 = hardness_params(&rational(3, 4), &rational(1, 2), 1).unwrap().alpha;
    for t in 1..=8usize {
        let a = hardness_params(&rational(3, 4), &rational(1, 2), t).unwrap().alpha;
        assert_eq!(&a1 / a, rational(((t + 1) * (t + 1)) as i64, 4));
    }
    assert!(hardness_params(&rational(1, 2), &rational(1, 2), 1).is_err());
    assert!(hardness_params(&rational(3, 4), &rational(1, 4), 1).is_err());
    assert!(hardness_params(&rational(3, 4), &rational(1, 2), 0).is_err());
}

#[test]
fn trivial_instance() {
    let v = trivial_toy(1).unwrap();
    let ham = build_kitaev(&v, 0.01).unwrap();
    assert!(ham.gap.lambda_min.abs() < 1e-12);
    assert_eq!(ham.gap.kernel_dim, 2);
    // two decoupled copies of the 2-level path: lambda_2 = 1
    assert!((ham.gap.lambda_2 - 1.0).abs() < 1e-12);
    let psi = proof(0.3);
    let eta = history_state(&v, &psi).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expect = [h * 0.3f64.cos(), h * 0.3f64.sin(), h * 0.3f64.cos(), h * 0.3f64.sin()];
    for (a, b) in eta.iter().zip(expect) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(ham.energy(&eta).abs() < 1e-15);
    let t0 = ToyVerifier::plain(0, 0, 1, vec![], ProjectorSpec::general(vec![]).unwrap()).unwrap();
    assert_eq!(history_state(&t0, &psi).unwrap(), psi.amplitudes());
}

#[test]
fn parts_are_psd_and_total_is_stoquastic() {
    for v in [yes_toy(), no_toy(), sweep_toy(4).unwrap()] {
        let ham = build_kitaev(&v, big_delta(&v)).unwrap();
        assert!(ham.min_eigenvalues.iter().all(|&m| m >= -1e-10));
        let census = sparsity_census(&v, &ham.total());
        assert!(census.stoquastic);
        assert!(census.max_row_nnz <= census.bound);
        assert_eq!(ham.gap.kernel_dim, 1 << v.witness());
    }
}

#[test]
fn kernel_is_spanned_by_history_states() {
    let v = yes_toy();
    let ham = build_kitaev(&v, big_delta(&v)).unwrap();
    let p = ham.history_projector();
    for x in 0..1u128 << v.witness() {
        let eta = history_state(&v, &StateVector::basis(v.witness(), x).unwrap()).unwrap();
        assert!(ham.clean_energy(&eta) < 1e-12);
        assert!((ham.kernel_weight(&eta) - 1.0).abs() < 1e-10);
    }
    let ortho = (nalgebra::DMatrix::identity(ham.dim(), ham.dim()) - &p).column(0).into_owned();
    let ortho: Vec<f64> = (&ortho / ortho.norm()).iter().copied().collect();
    assert!(ham.kernel_weight(&ortho) < 1e-10);
}

#[test]
fn delta_guard() {
    let v = yes_toy();
    let d = big_delta(&v);
    assert!(build_kitaev(&v, d).is_ok());
    assert!(build_kitaev(&v, d * 1.01).is_err());
    assert!(build_kitaev(&v, 0.0).is_err());
}

#[test]
fn energy_identity_on_random_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for v in [yes_toy(), no_toy(), sweep_toy(3).unwrap()] {
        for delta in [big_delta(&v), 1e-4] {
            let ham = build_kitaev(&v, delta).unwrap();
            for i in 0..5 {
                let w = random_state(v.witness(), i % 2 == 0, &mut rng).unwrap();
                let id = energy_identity(&v, &ham, &w).unwrap();
                assert!(id.error <= 1e-10, "{id:?}");
                assert!(id.clean_energy.abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn yes_toy_completeness() {
    let v = yes_toy();
    assert_eq!(v.steps(), 2);
    let ham = build_kitaev(&v, big_delta(&v)).unwrap();
    let theta = 0.9f64.sqrt().acos();
    let rep = completeness_check(&v, &ham, 0.75, &proof(theta)).unwrap();
    assert!((rep.honest_acceptance - 0.9).abs() < 1e-12);
    assert!((rep.energy - ham.delta * 0.1 / 3.0).abs() < 1e-10);
    assert!(rep.pass, "{rep:?}");
    let perfect = completeness_check(&v, &ham, 0.75, &proof(0.0)).unwrap();
    assert!(perfect.energy.abs() < 1e-15);
    assert!(completeness_check(&v, &ham, 0.75, &proof(1.2)).is_err());
}

#[test]
fn honest_history_state_is_product() {
    let v = sweep_toy(5).unwrap();
    let ham = build_kitaev(&v, big_delta(&v)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cut = proof_cut(&v).unwrap();
    for _ in 0..5 {
        let psi = random_state(2, true, &mut rng).unwrap();
        let eta = history_state(&v, &v.honest_witness(&psi).unwrap()).unwrap();
        assert!(top_schmidt(&eta, &cut) >= 1.0 - 1e-10);
        let _ = &ham;
    }
    let skew = random_state(4, true, &mut rng).unwrap();
    assert!(top_schmidt(&history_state(&v, &skew).unwrap(), &cut) < 1.0 - 1e-3);
}

#[test]
fn no_toy_soundness() {
    let v = no_toy();
    let acc = max_product_acceptance(&v, 3).unwrap();
    assert!((acc.value - 0.25).abs() < 1e-6, "{acc:?}");
    for delta in [hardness_delta(&rational(3, 4), &rational(1, 2), 1, default_c().unwrap()).unwrap(), big_delta(&v)] {
        let ham = build_kitaev(&v, delta).unwrap();
        let rep = soundness_check(&v, &ham, 0.75, 0.5, 3).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
    let y = yes_toy();
    let ham = build_kitaev(&y, big_delta(&y)).unwrap();
    assert!(soundness_check(&y, &ham, 0.75, 0.5, 3).is_err());
}

#[test]
fn sweep_reports_positive_constants() {
    let sweep = c_t_sweep().unwrap();
    assert_eq!(sweep.len(), 6);
    assert!(sweep.iter().all(|p| p.lambda_2 > 0.0 && p.c_t > 0.0));
    let c = default_c().unwrap();
    assert_eq!(c, sweep.iter().map(|p| p.c_t).fold(f64::INFINITY, f64::min));
}

fn perturbed(phi: &StateVector, eps: f64, rng: &mut ChaCha8Rng) -> StateVector {
    let n = phi.qubits();
    let r = random_unit_vector(1 << n, true, rng);
    let dot: f64 = r.iter().zip(phi.amplitudes()).map(|(a, b)| a * b).sum();
    let mut perp: Vec<f64> = r.iter().zip(phi.amplitudes()).map(|(a, b)| a - dot * b).collect();
    let norm = perp.iter().map(|a| a * a).sum::<f64>().sqrt();
    perp.iter_mut().for_each(|a| *a /= norm);
    let amps = phi.amplitudes().iter().zip(&perp).map(|(p, q)| (1.0 - eps).sqrt() * p + eps.sqrt() * q).collect();
    StateVector::from_amplitudes(n, amps).unwrap()
}

#[test]
fn overlap_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for v in [no_toy(), yes_toy()] {
        let ham = build_kitaev(&v, big_delta(&v)).unwrap();
        for eps in [0.0, 0.01, 0.1, 0.5] {
            for _ in 0..10 {
                let phi = random_state(1, true, &mut rng).unwrap().tensor(&random_state(1, true, &mut rng).unwrap()).unwrap();
                let psi = if eps == 0.0 { phi.clone() } else { perturbed(&phi, eps, &mut rng) };
                let rep = overlap_check(&v, &ham, 0.5, &psi, &phi).unwrap();
                assert!((rep.eps - eps).abs() < 1e-12);
                assert!(rep.holds, "{rep:?}");
            }
        }
        let orth = overlap_check(&v, &ham, 0.5, &StateVector::basis(2, 0).unwrap(), &StateVector::basis(2, 3).unwrap()).unwrap();
        assert_eq!(orth.eps, 1.0);
        assert!(orth.energy_lower.is_none_or(|lo| lo < 0.0));
    }
}

#[test]
fn low_energy_products_are_near_history_states() {
    let v = yes_toy();
    let (c, s) = (rational(3, 4), rational(1, 2));
    let c_const = default_c().unwrap();
    let params = hardness_params(&c, &s, v.steps()).unwrap();
    let ham = build_kitaev(&v, c_const * to_f64(&params.delta_over_c)).unwrap();
    let cut = proof_cut(&v).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut states = Vec::new();
    for _ in 0..10 {
        let psi = random_state(1, false, &mut rng).unwrap();
        let eta = history_state(&v, &v.honest_witness(&psi).unwrap()).unwrap();
        let m = cut.reshape(&eta);
        let svd = m.svd(true, true);
        let i = svd.singular_values.imax();
        let a: Vec<f64> = svd.u.as_ref().unwrap().column(i).iter().copied().collect();
        let b: Vec<f64> = svd.v_t.as_ref().unwrap().row(i).iter().copied().collect();
        for k in 1..=8 {
            let theta = 10f64.powf(-(k as f64) * 0.6);
            let r = random_unit_vector(a.len(), true, &mut rng);
            let mut pa: Vec<f64> = a.iter().zip(&r).map(|(x, y)| x + theta * y).collect();
            let norm = pa.iter().map(|x| x * x).sum::<f64>().sqrt();
            pa.iter_mut().for_each(|x| *x /= norm);
            states.push(cut.product(&pa, &b));
        }
    }
    let rep = kernel_proximity_check(&v, &ham, &states, to_f64(&params.alpha), c_const).unwrap();
    assert!(rep.low_energy > 0 && rep.low_energy < rep.tested, "{rep:?}");
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn text_round_trip() {
    for v in [yes_toy(), no_toy(), sweep_toy(5).unwrap(), trivial_toy(2).unwrap()] {
        assert_eq!(ToyVerifier::parse(&v.to_text()).unwrap(), v);
    }
    let text = "# two one-qubit proofs\nTOY zero=1 plus=1 split=1\nSTEP CNOT 2 0; X 0\nACCEPT 1:plus 0:zero\n";
    let v = ToyVerifier::parse(text).unwrap();
    assert_eq!(v.steps(), 2);
    assert_eq!(v.step(1), &[Gate::fredkin(1, 2, 3)]);
    assert!(ToyVerifier::parse("TOY zero=1 plus=1 split=1\nSTEP CNOT 3 0\nACCEPT 1:plus\n").is_err());
    assert!(ToyVerifier::parse("TOY zero=0 plus=0 split=1\nACCEPT\n").is_err());
    assert!(ToyVerifier::parse("TOY zero=1 plus=1 split=1\n").is_err());
}

#[test]
fn coordinate_list_dump() {
    let v = trivial_toy(1).unwrap();
    let ham = build_kitaev(&v, 0.1).unwrap();
    let mut buf = Vec::new();
    write_coordinate_list(&ham.h_prop, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.starts_with("0 0 0.5\n0 2 -0.5\n"));
}

#[test]
fn cut_is_block_split() {
    let v = yes_toy();
    let cut = proof_cut(&v).unwrap();
    let b = Bipartition::blocks(cut.dim_a(), cut.dim_b()).unwrap();
    assert_eq!(cut.dim(), (v.steps() + 1) << v.qubits());
    assert_eq!(b.dim(), cut.dim());
}

#[test]
fn analyze_reports() {
    let rep = analyze(&yes_toy(), &rational(3, 4), &rational(1, 2), None, 1).unwrap();
    assert!(rep.pass, "{:?}", rep.checks);
    assert!(rep.completeness.is_some());
    assert!(rep.soundness.is_none());
    let rep = analyze(&no_toy(), &rational(3, 4), &rational(1, 2), None, 1).unwrap();
    assert!(rep.pass, "{:?}", rep.checks);
    assert!(rep.completeness.is_none());
    assert!(rep.soundness.is_some());
}
