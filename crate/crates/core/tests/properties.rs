use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stoqverif::hamiltonian::{decompose_1sparse, normalize_shift};
use stoqverif::harness::{gen_random_instance, random_generalized_verifier, random_state};
use stoqverif::multiprover::{helper_inequality_check, param_maps, product_test, sw_bound, Partition};
use stoqverif::statevector::StateVector;
use stoqverif::swap::compile_generalized;
use stoqverif::verifier::{rational, Backend, Verifier};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_recomposes(seed in any::<u64>(), n in 2u32..7, d in 1usize..6) {
        let h = normalize_shift(&gen_random_instance(n, d.min(1 << n), 12, seed).unwrap()).unwrap();
        let terms = decompose_1sparse(&h).unwrap();
        prop_assert_eq!(terms.len(), (h.d() * h.d()).max(1));
        let dense = h.to_dense();
        let mut sum = DMatrix::zeros(dense.nrows(), dense.ncols());
        for t in &terms {
            for (x, y, v) in t.entries() {
                sum[(x as usize, y as usize)] += v.to_f64();
            }
        }
        prop_assert!((sum - dense).abs().max() == 0.0);
    }

    #[test]
    fn acceptance_is_affine_in_energy(seed in any::<u64>(), n in 2u32..6, d in 1usize..4) {
        let h = normalize_shift(&gen_random_instance(n, d.min(1 << n), 12, seed).unwrap()).unwrap();
        let v = Verifier::new(&h, Backend::Fast).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(n as usize, true, &mut rng).unwrap();
        let r = v.run(&psi).unwrap();
        let dd = (h.d() * h.d()).max(1) as f64;
        let energy = h.expectation(psi.amplitudes());
        prop_assert!((r.p - (0.5 - energy / (4.0 * dd))).abs() < 1e-10);
        prop_assert!((0.0..=1.0).contains(&r.p));
    }

    #[test]
    fn compiled_acceptance_law(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (vg, x) = random_generalized_verifier(&mut rng).unwrap();
        let w = random_state(vg.circuit.layout.witness, true, &mut rng).unwrap();
        let p = vg.circuit.acceptance(&x, &w, &vg.projector).unwrap();
        let s = compile_generalized(&vg).unwrap();
        let q = s.circuit.acceptance(&x, &w, &s.projector).unwrap();
        prop_assert!((q - 0.5 - 0.5 * p).abs() < 1e-10);
    }

    #[test]
    fn product_test_below_sw_bound(seed in any::<u64>(), na in 1usize..3, nb in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let part = Partition::new(vec![na, nb]).unwrap();
        let psi = random_state(na + nb, true, &mut rng).unwrap();
        let m = DMatrix::from_row_slice(1 << na, 1 << nb, psi.amplitudes());
        let top = m.singular_values().max();
        let pt = product_test(&psi, &psi, &part).unwrap();
        prop_assert!(pt <= sw_bound(1.0 - top * top).unwrap() + 1e-12);
        prop_assert!(pt >= 0.5 - 1e-12);
    }

    #[test]
    fn product_test_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let part = Partition::new(vec![1, 2]).unwrap();
        let a = random_state(3, true, &mut rng).unwrap();
        let b = random_state(3, true, &mut rng).unwrap();
        let ab = product_test(&a, &b, &part).unwrap();
        let ba = product_test(&b, &a, &part).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
    }

    #[test]
    fn param_maps_stay_ordered(cn in 101i64..=200, sn in 100i64..200) {
        prop_assume!(sn < cn);
        let (c, s) = (rational(cn, 200), rational(sn, 200));
        let m = param_maps(&c, &s).unwrap();
        prop_assert!(m.closed_form_holds());
        prop_assert!(m.c1 > c && m.c2 > m.c1 && m.s2 >= m.s1);
        prop_assert!(m.c2 <= rational(1, 1) && m.s2 <= rational(1, 1));
    }

    #[test]
    fn helper_inequality_on_simplex(z in 0.0f64..=0.5, u in 0.0f64..=1.0) {
        prop_assert!(helper_inequality_check(z * u, z - z * u, z).unwrap());
    }
}

#[test]
fn product_state_passes_with_certainty() {
    let part = Partition::new(vec![1, 1]).unwrap();
    let plus = StateVector::from_amplitudes(1, vec![0.5f64.sqrt(); 2]).unwrap();
    let zero = StateVector::from_amplitudes(1, vec![1.0, 0.0]).unwrap();
    let prod = plus.tensor(&zero).unwrap();
    assert!((product_test(&prod, &prod, &part).unwrap() - 1.0).abs() < 1e-12);
}
