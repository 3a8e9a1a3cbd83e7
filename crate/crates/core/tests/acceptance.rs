//! Acceptance criteria 1-12. Runs without the libtest harness so that every
//! criterion prints exactly one pass/fail line.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num::rational::BigRational;
use num::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stoqverif::hamiltonian::{decompose_1sparse, normalize_shift};
use stoqverif::harness::{
    gen_random_instance, instances_csv, random_density, random_generalized_verifier, random_state, random_unit_vector,
    run_experiment, witnesses_csv, ExperimentConfig,
};
use stoqverif::kitaev::{
    analyze, build_kitaev, completeness_check, default_c, energy_identity, h_init, h_prop, hardness_delta,
    history_state, no_toy, overlap_check, proof_cut, soundness_check, spectral_gap, sparsity_census, sweep_toy,
    top_schmidt, yes_toy, ToyVerifier,
};
use stoqverif::multiprover::toys::{adversary_family, cat_projector_verifier, cat_state, random_product_state};
use stoqverif::multiprover::{
    helper_inequality_check, helper_slack_exact, max_product_overlap, param_maps, product_test, product_test_circuit,
    product_test_density, region_contains, region_csv, region_curve, simulate_k_to_2, Partition,
};
use stoqverif::statevector::StateVector;
use stoqverif::swap::{compile_generalized, pure_density, swap_test_accept, swap_test_circuit_accept, transport_thresholds};
use stoqverif::verifier::{parse_rational, rational, to_f64, Backend, Verifier};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)*));
        }
    };
}

fn seeded_config() -> ExperimentConfig {
    ExperimentConfig { seed: 2024, n_range: (2, 8), d_range: (1, 6), ell: 16, instances: 50, margin_denominator: 8 }
}

/// Instance parameters for the formula and decomposition suites.
fn formula_instances() -> Vec<(u64, u32, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    (0..50)
        .map(|_| {
            let n = rng.random_range(2..=8u32);
            let d = rng.random_range(1..=6usize).min(1 << n);
            (rng.random(), n, d)
        })
        .collect()
}

fn witnesses(h: &DMatrix<f64>, n: u32, rng: &mut ChaCha8Rng) -> Vec<(&'static str, Vec<f64>)> {
    let dim = 1usize << n;
    let eig = SymmetricEigen::new(h.clone());
    let i = eig.eigenvalues.imin();
    let ground: Vec<f64> = eig.eigenvectors.column(i).iter().map(|a| a.abs()).collect();
    let mut basis = vec![0.0; dim];
    basis[rng.random_range(0..dim)] = 1.0;
    vec![
        ("ground", ground),
        ("random_nonnegative", random_unit_vector(dim, false, rng)),
        ("random_signed", random_unit_vector(dim, true, rng)),
        ("basis", basis),
        ("uniform", vec![(dim as f64).sqrt().recip(); dim]),
    ]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut runs = 0;
    for (seed, n, d) in formula_instances() {
        let h = normalize_shift(&gen_random_instance(n, d, 16, seed).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let dense = h.to_dense();
        let dd = (h.d() * h.d()).max(1) as f64;
        let verifier = Verifier::new(&h, Backend::Fast).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (kind, psi) in witnesses(&dense, n, &mut rng) {
            let v = DVector::from_column_slice(&psi);
            let energy = v.dot(&(&dense * &v));
            let mass: f64 = (0..psi.len()).map(|x| psi[x] * psi[x] * dense.row(x).iter().map(|a| a.abs()).sum::<f64>()).sum();
            let (v1, v2, vv) = ((mass - energy) / (2.0 * dd), 1.0 - mass / (2.0 * dd), 0.5 - energy / (4.0 * dd));
            let r = verifier.run(&StateVector::from_amplitudes(n as usize, psi).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let err = (r.p1 - v1).abs().max((r.p2 - v2).abs()).max((r.p - vv).abs());
            ensure!(err <= 1e-9, "n={n} d={d} witness {kind}: error {err:e}");
            worst = worst.max(err);
            runs += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs <= 300.0, "took {secs:.1} s");
    Ok(format!("{runs} runs, max error {worst:.2e}, {secs:.1} s"))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for (seed, n, d) in formula_instances() {
        let raw = gen_random_instance(n, d, 16, seed).map_err(|e| e.to_string())?;
        for h in [raw.clone(), normalize_shift(&raw).map_err(|e| e.to_string())?] {
            let terms = decompose_1sparse(&h).map_err(|e| e.to_string())?;
            ensure!(terms.len() == (h.d() * h.d()).max(1), "{} terms for d = {}", terms.len(), h.d());
            let mut seen: BTreeMap<(u64, u64), i64> = BTreeMap::new();
            for (j, t) in terms.iter().enumerate() {
                let mut rows = std::collections::BTreeSet::new();
                for (x, y, v) in t.entries() {
                    ensure!(rows.insert(x), "term {j} has two entries in row {x}");
                    ensure!(t.partner(y) == x, "term {j} is not an involution at {x}");
                    ensure!(x == y || v.signed_numerator() <= 0, "term {j} has a positive off-diagonal");
                    ensure!(seen.insert((x, y), v.signed_numerator()).is_none(), "entry ({x},{y}) in two terms");
                }
            }
            let want: BTreeMap<(u64, u64), i64> = h.entries().map(|(x, y, v)| ((x, y), v.signed_numerator())).collect();
            ensure!(seen == want, "recomposition differs from the instance (n={n}, d={d})");
            count += 1;
        }
    }
    Ok(format!("{count} decompositions exact"))
}

fn criterion_3() -> Outcome {
    let report = run_experiment(&seeded_config()).map_err(|e| e.to_string())?;
    let mut yes = 0;
    let mut no = 0;
    for i in &report.instances {
        let dd = BigRational::from_integer(((i.d_shifted * i.d_shifted) as i64).into());
        let (Some(y), Some(nside)) = (&i.yes, &i.no) else { continue };
        let alpha = (parse_rational(&y.alpha_raw).map_err(|e| e.to_string())? - rational(1, 1)) / rational(2, 1);
        let beta = (parse_rational(&y.beta_raw).map_err(|e| e.to_string())? - rational(1, 1)) / rational(2, 1);
        let a = to_f64(&(rational(3, 4) + alpha.abs() / (rational(8, 1) * &dd)));
        let b = to_f64(&(rational(3, 4) + beta.abs() / (rational(8, 1) * &dd)));
        ensure!((a - y.a).abs() < 1e-12 && (b - nside.b).abs() < 1e-12, "instance {}: thresholds differ", i.id);
        ensure!(y.compiled >= a - 1e-9, "instance {}: yes compiled {} < a = {a}", i.id, y.compiled);
        let lambda_no = (i.lambda_min_raw + i.diagonal_shift - 1.0) / 2.0;
        let best = 0.75 - lambda_no / (8.0 * to_f64(&dd));
        ensure!((best - nside.compiled).abs() < 1e-9, "instance {}: no-side oracle mismatch", i.id);
        ensure!(best <= b + 1e-9, "instance {}: no compiled {best} > b = {b}", i.id);
        yes += 1;
        no += 1;
    }
    ensure!(report.pass, "experiment reported failures");
    ensure!(yes == report.instances.len(), "{} of {} instances admit the promise", yes, report.instances.len());
    Ok(format!("{yes} yes-instances and {no} no-instances"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (vg, x) = random_generalized_verifier(&mut rng).map_err(|e| e.to_string())?;
        let w = random_state(vg.circuit.layout.witness, true, &mut rng).map_err(|e| e.to_string())?;
        let p = vg.circuit.acceptance(&x, &w, &vg.projector).map_err(|e| e.to_string())?;
        let s = compile_generalized(&vg).map_err(|e| e.to_string())?;
        ensure!(s.is_legal(), "compiled verifier is not single-qubit");
        let q = s.circuit.acceptance(&x, &w, &s.projector).map_err(|e| e.to_string())?;
        worst = worst.max((q - 0.5 - 0.5 * p).abs());
    }
    ensure!(worst <= 1e-10, "affine law off by {worst:e}");
    for _ in 0..50 {
        let den = rng.random_range(1..1000i64);
        let (a, b) = (rational(rng.random_range(0..=den), den), rational(rng.random_range(0..=den), den));
        let (ta, tb) = transport_thresholds(&a, &b);
        ensure!(ta == (rational(1, 1) + &a) / rational(2, 1) && tb == (rational(1, 1) + &b) / rational(2, 1), "transport");
    }
    Ok(format!("50 verifiers, max deviation {worst:.2e}; transport exact"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for n in 1..=3 {
        for rank in [1, 2, 4] {
            let (r, s) = (random_density(n, rank, &mut rng), random_density(n, rank, &mut rng));
            let formula = 0.5 * (1.0 + (&r * &s).trace());
            let f = swap_test_accept(&r, &s).map_err(|e| e.to_string())?;
            let c = swap_test_circuit_accept(&r, &s).map_err(|e| e.to_string())?;
            ensure!((f - formula).abs() <= 1e-10 && (c - formula).abs() <= 1e-10, "swap test {f} / {c} vs {formula}");
        }
    }
    for sizes in [vec![1, 1], vec![2, 1], vec![1, 1, 1], vec![2, 2]] {
        let part = Partition::new(sizes).map_err(|e| e.to_string())?;
        let n = part.qubits();
        for _ in 0..5 {
            let prod = random_product_state(&part, true, &mut rng).map_err(|e| e.to_string())?;
            let pt = product_test(&prod, &prod, &part).map_err(|e| e.to_string())?;
            ensure!((pt - 1.0).abs() <= 1e-12, "PT(product) = {pt}");
            let (a, b) = (random_state(n, true, &mut rng).unwrap(), random_state(n, true, &mut rng).unwrap());
            let povm = product_test(&a, &b, &part).map_err(|e| e.to_string())?;
            let circ = product_test_circuit(&a, &b, &part).map_err(|e| e.to_string())?;
            ensure!((povm - circ).abs() <= 1e-10, "POVM {povm} vs circuit {circ}");
        }
    }
    let part = Partition::new(vec![1, 2]).unwrap();
    for _ in 0..100 {
        let r = random_density(3, rng.random_range(1..=8), &mut rng);
        let s = random_density(3, rng.random_range(1..=8), &mut rng);
        let prs = product_test_density(&r, &s, &part).map_err(|e| e.to_string())?;
        let pr = product_test_density(&r, &r, &part).map_err(|e| e.to_string())?;
        let ps = product_test_density(&s, &s, &part).map_err(|e| e.to_string())?;
        ensure!(prs <= 0.5 * (pr + ps) + 1e-12, "mixed bound {prs} > ({pr} + {ps})/2");
    }
    let _ = pure_density;
    Ok("swap formula, product states, POVM/circuit and 100 mixed pairs".into())
}

fn sw_formula(eps: f64) -> f64 {
    if eps <= 0.5 {
        1.0 - eps + eps * eps
    } else {
        1.0 - 2.0 * eps / 3.0 + eps * eps / 3.0
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut tightest = f64::INFINITY;
    for i in 0..200 {
        let (na, nb) = [(1, 1), (1, 2), (2, 1), (2, 2)][i % 4];
        let part = Partition::new(vec![na, nb]).unwrap();
        let psi = random_state(na + nb, i % 3 != 0, &mut rng).map_err(|e| e.to_string())?;
        let m = DMatrix::from_row_slice(1 << na, 1 << nb, psi.amplitudes());
        let top = m.singular_values().max();
        let eps = 1.0 - top * top;
        let ov = max_product_overlap(&psi, &part, 0).map_err(|e| e.to_string())?;
        ensure!((ov.eps - eps).abs() < 1e-10, "overlap {} vs SVD {eps}", ov.eps);
        let pt = product_test(&psi, &psi, &part).map_err(|e| e.to_string())?;
        ensure!(pt <= sw_formula(eps) + 1e-12, "PT {pt} above bound {}", sw_formula(eps));
        tightest = tightest.min(sw_formula(eps) - pt);
    }
    let bell = cat_state(2).unwrap();
    let part = Partition::new(vec![1, 1]).unwrap();
    let pt = product_test(&bell, &bell, &part).map_err(|e| e.to_string())?;
    let eps = max_product_overlap(&bell, &part, 0).map_err(|e| e.to_string())?.eps;
    ensure!((pt - 0.75).abs() <= 1e-12 && (sw_formula(eps) - 0.75).abs() <= 1e-12, "Bell: PT {pt}, bound {}", sw_formula(eps));
    Ok(format!("200 states, smallest slack {tightest:.2e}; Bell 3/4 = 3/4"))
}

fn criterion_7() -> Outcome {
    let grid = |i: i64| rational(1, 2) + rational(i, 198);
    let mut inside = 0;
    for i in 0..100 {
        for j in 0..100 {
            let (c, s) = (grid(i), grid(j));
            let m = param_maps(&c, &s).map_err(|e| e.to_string())?;
            let one = rational(1, 1);
            let two = rational(2, 1);
            ensure!(m.c1 == (&one + &c) / &two && m.c2 == (&one + &m.c1) / &two && m.s2 == (&one + &m.s1) / &two, "composition");
            ensure!(m.closed_form_holds(), "closed form at ({c}, {s})");
            let t = &s * &s - &s * &two;
            let want = c > (&two + &t * &t) / rational(3, 1);
            ensure!(region_contains(&c, &s).map_err(|e| e.to_string())? == want, "region at ({c}, {s})");
            inside += want as usize;
        }
    }
    let csv = region_csv(&region_curve(1000).map_err(|e| e.to_string())?);
    let mut worst = 0.0f64;
    for line in csv.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let t = f[0] * f[0] - 2.0 * f[0];
        worst = worst.max((f[1] - (2.0 + t * t) / 3.0).abs());
    }
    ensure!(worst <= 1e-12, "boundary CSV off by {worst:e}");
    Ok(format!("10^4 grid points ({inside} inside), boundary error {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut min_slack = f64::INFINITY;
    for i in 1..=100 {
        let z = 0.5 * i as f64 / 100.0;
        for j in 0..100 {
            let u = j as f64 / 99.0;
            let (x, y) = (z * u, z - z * u);
            ensure!(helper_inequality_check(x, y, z).map_err(|e| e.to_string())?, "fails at ({x}, {y}, {z})");
            let slack = 4.0 * (x * x + y * y) - 8.0 * (x.powi(4) + y.powi(4)) - (2.0 * z * z - z.powi(4));
            ensure!(slack >= -1e-12, "independent slack {slack} at ({x}, {y}, {z})");
            min_slack = min_slack.min(slack);
        }
        let h = z / 2.0;
        let eq = 4.0 * (2.0 * h * h) - 8.0 * (2.0 * h.powi(4)) - (2.0 * z * z - z.powi(4));
        ensure!(eq.abs() <= 1e-12, "equality case off by {eq}");
        let hz = rational(i, 400);
        ensure!(helper_slack_exact(&hz, &hz) == rational(0, 1), "exact equality at z = {z}");
    }
    Ok(format!("10^4 points, min slack {min_slack:.2e}, equality exact"))
}

fn big_delta(v: &ToyVerifier) -> Result<f64, String> {
    let (gap, _) = spectral_gap(&(h_init(v) + h_prop(v)), v.steps()).map_err(|e| e.to_string())?;
    Ok(gap.lambda_2 / 10.0)
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut toys = vec![yes_toy(), no_toy()];
    for t in 1..=6 {
        toys.push(sweep_toy(t).map_err(|e| e.to_string())?);
    }
    let mut c_ts = Vec::new();
    for v in &toys {
        ensure!(v.steps() <= 6 && ((v.steps() + 1) << v.qubits()) <= 7 << 10, "toy too large");
        let d = big_delta(v)?;
        ensure!(build_kitaev(v, d * 1.01).is_err(), "delta guard not enforced");
        for delta in [d, hardness_delta(&rational(3, 4), &rational(1, 2), v.steps(), default_c().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?] {
            let ham = build_kitaev(v, delta).map_err(|e| e.to_string())?;
            ensure!(ham.gap.lambda_min.abs() <= 1e-10, "lambda_min = {}", ham.gap.lambda_min);
            ensure!(ham.gap.kernel_dim == 1 << v.witness(), "kernel dimension {}", ham.gap.kernel_dim);
            let census = sparsity_census(v, &ham.total());
            ensure!(census.stoquastic && census.max_row_nnz <= census.bound, "census {census:?}");
            for i in 0..5 {
                let w = random_state(v.witness(), i % 2 == 0, &mut rng).map_err(|e| e.to_string())?;
                let id = energy_identity(v, &ham, &w).map_err(|e| e.to_string())?;
                ensure!(id.error <= 1e-10, "energy identity off by {:e}", id.error);
            }
            let psi = random_state(v.proof_qubits(), false, &mut rng).map_err(|e| e.to_string())?;
            let eta = history_state(v, &v.honest_witness(&psi).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let top = top_schmidt(&eta, &proof_cut(v).map_err(|e| e.to_string())?);
            ensure!(top >= 1.0 - 1e-10, "honest history state has top Schmidt weight {top}");
        }
        if v.steps() >= 1 && v.split() == [2] {
            let (gap, _) = spectral_gap(&(h_init(v) + h_prop(v)), v.steps()).map_err(|e| e.to_string())?;
            c_ts.push(format!("T={}:{:.4}", v.steps(), gap.c_t));
        }
    }
    let y = yes_toy();
    let ham = build_kitaev(&y, hardness_delta(&rational(3, 4), &rational(1, 2), 2, default_c().unwrap()).unwrap())
        .map_err(|e| e.to_string())?;
    let theta = 0.9f64.sqrt().acos();
    let psi = StateVector::from_amplitudes(1, vec![theta.cos(), theta.sin()]).unwrap();
    let rep = completeness_check(&y, &ham, 0.75, &psi).map_err(|e| e.to_string())?;
    ensure!(rep.pass && rep.energy <= rep.bound + 1e-10, "completeness {rep:?}");
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs <= 600.0, "took {secs:.1} s");
    Ok(format!("{} toys; C_T {}; {secs:.1} s", toys.len(), c_ts.join(" ")))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut count = 0;
    for v in [no_toy(), yes_toy()] {
        let ham = build_kitaev(&v, big_delta(&v)?).map_err(|e| e.to_string())?;
        for eps in [0.01f64, 0.1, 0.5] {
            for _ in 0..20 {
                let phi = random_state(1, true, &mut rng).unwrap().tensor(&random_state(1, true, &mut rng).unwrap()).unwrap();
                let r = random_unit_vector(4, true, &mut rng);
                let dot: f64 = r.iter().zip(phi.amplitudes()).map(|(a, b)| a * b).sum();
                let perp: Vec<f64> = r.iter().zip(phi.amplitudes()).map(|(a, b)| a - dot * b).collect();
                let norm = perp.iter().map(|a| a * a).sum::<f64>().sqrt();
                let amps = phi.amplitudes().iter().zip(&perp).map(|(p, q)| (1.0 - eps).sqrt() * p + eps.sqrt() * q / norm).collect();
                let psi = StateVector::from_amplitudes(2, amps).unwrap();
                let rep = overlap_check(&v, &ham, 0.5, &psi, &phi).map_err(|e| e.to_string())?;
                let diff = (v.rejection(&psi).unwrap() - v.rejection(&phi).unwrap()).abs();
                ensure!((rep.eps - eps).abs() < 1e-12, "eps {} vs {eps}", rep.eps);
                ensure!(diff <= 2.0 * eps.sqrt() + 1e-12 && rep.holds, "eps {eps}: difference {diff}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} perturbed pairs"))
}

fn criterion_11() -> Outcome {
    let v = no_toy();
    let mut lines = Vec::new();
    for delta in [hardness_delta(&rational(3, 4), &rational(1, 2), 1, default_c().unwrap()).unwrap(), big_delta(&v)?] {
        let ham = build_kitaev(&v, delta).map_err(|e| e.to_string())?;
        let rep = soundness_check(&v, &ham, 0.75, 0.5, 11).map_err(|e| e.to_string())?;
        ensure!(rep.pass, "product energy {} below threshold {}", rep.min_product_energy, rep.threshold);
        lines.push(format!("{:.3}x", rep.min_product_energy / rep.threshold));
    }
    let s1 = to_f64(&param_maps(&rational(1, 1), &rational(1, 2)).unwrap().s1);
    let mut worst = 0.0f64;
    for sizes in [vec![1, 1], vec![1, 1, 1]] {
        let part = Partition::new(sizes).unwrap();
        let base = cat_projector_verifier(part.qubits()).map_err(|e| e.to_string())?;
        let fam = adversary_family(&part, 11).map_err(|e| e.to_string())?;
        for a in &fam {
            for b in &fam {
                worst = worst.max(simulate_k_to_2(&base, a, b, &part).map_err(|e| e.to_string())?);
            }
        }
    }
    ensure!(worst <= s1, "adversary reaches {worst} > s1 = {s1}");
    Ok(format!("heuristic: product energy {} of threshold; adversary max {worst:.4} <= s1 {s1:.4}", lines.join(", ")))
}

fn criterion_12() -> Outcome {
    let run = || -> Result<Vec<String>, String> {
        let r = run_experiment(&seeded_config()).map_err(|e| e.to_string())?;
        let mut out = vec![instances_csv(&r), witnesses_csv(&r), serde_json::to_string(&r).map_err(|e| e.to_string())?];
        for v in [yes_toy(), no_toy()] {
            let k = analyze(&v, &rational(3, 4), &rational(1, 2), None, 12).map_err(|e| e.to_string())?;
            out.push(serde_json::to_string(&k).map_err(|e| e.to_string())?);
        }
        out.push(region_csv(&region_curve(100).map_err(|e| e.to_string())?));
        Ok(out)
    };
    let (a, b) = (run()?, run()?);
    ensure!(a == b, "reports differ between runs");
    Ok(format!("{} reports, {} bytes, identical", a.len(), a.iter().map(String::len).sum::<usize>()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("verifier formulas", criterion_1),
        ("decomposition", criterion_2),
        ("thresholds", criterion_3),
        ("generalized compilation", criterion_4),
        ("swap and product tests", criterion_5),
        ("product test bound", criterion_6),
        ("parameter maps and region", criterion_7),
        ("helper inequality", criterion_8),
        ("clock hamiltonian", criterion_9),
        ("overlap lemma", criterion_10),
        ("one-sided soundness", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
