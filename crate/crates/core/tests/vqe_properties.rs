use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scm_core::pauli::{decompose, group_qubitwise};
use scm_core::scm::exact_ground;
use scm_core::vqe::{
    prepare_state, run_vqe, run_vqe_multistart, spsa_minimize, CompiledSum, EnergyMode,
    GroupedSampler, VqeOptions,
};
use scm_core::{
    AnsatzSpec, DenseHamiltonian, PauliOp, PauliSum, RotationScheme, SpsaParams, Statevector,
};

fn scheme() -> impl Strategy<Value = RotationScheme> {
    prop_oneof![Just(RotationScheme::Y), Just(RotationScheme::Zxz)]
}

fn spec_and_theta() -> impl Strategy<Value = (AnsatzSpec, Vec<f64>)> {
    (1usize..=5, 0usize..=3, scheme()).prop_flat_map(|(q, d, s)| {
        let spec = AnsatzSpec::linear(q, d, s);
        let n = spec.parameter_count();
        (Just(spec), prop::collection::vec(-7.0..7.0f64, n))
    })
}

fn random_hamiltonian(qubits: u32, seed: u64) -> DenseHamiltonian {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseHamiltonian::from_upper_fn(1 << qubits, |_, _| rng.gen_range(-1.0..1.0))
}

/// `Σ c_P ⟨ψ|P|ψ⟩` by applying each string to the state one qubit at a time.
fn naive_expectation(state: &Statevector, sum: &PauliSum) -> f64 {
    let n = state.qubits();
    let amps = state.amplitudes();
    let i = Complex64::new(0.0, 1.0);
    let mut total = Complex64::new(0.0, 0.0);
    for term in sum.terms() {
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (b, &a) in amps.iter().enumerate() {
            let mut target = b;
            let mut amp = a;
            for (q, op) in term.ops.iter().enumerate() {
                // qubit 0 is the most significant bit
                let bit = 1 << (n - 1 - q);
                let set = b & bit != 0;
                match op {
                    PauliOp::I => {}
                    PauliOp::X => target ^= bit,
                    PauliOp::Y => {
                        target ^= bit;
                        amp *= if set { -i } else { i };
                    }
                    PauliOp::Z => {
                        if set {
                            amp = -amp;
                        }
                    }
                }
            }
            out[target] += amp;
        }
        let overlap: Complex64 = amps.iter().zip(&out).map(|(a, o)| a.conj() * o).sum();
        total += overlap * term.coeff;
    }
    assert!(total.im.abs() < 1e-10);
    total.re
}

proptest! {
    #[test]
    fn circuits_preserve_norm((spec, theta) in spec_and_theta()) {
        let psi = prepare_state(&spec, &theta).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energies_respect_the_variational_bound((spec, theta) in spec_and_theta(), seed in any::<u64>()) {
        let h = random_hamiltonian(spec.qubits as u32, seed);
        let sum = decompose(&h, 0.0).unwrap();
        let psi = prepare_state(&spec, &theta).unwrap();
        let e = CompiledSum::new(&sum).expectation(&psi);
        let eig = h.eigen();
        prop_assert!(e >= eig.values[0] - 1e-10);
        prop_assert!(e <= eig.values[eig.values.len() - 1] + 1e-10);
    }

    #[test]
    fn compiled_expectation_matches_naive((spec, theta) in spec_and_theta(), seed in any::<u64>()) {
        let h = random_hamiltonian(spec.qubits as u32, seed);
        let sum = decompose(&h, 0.0).unwrap();
        let psi = prepare_state(&spec, &theta).unwrap();
        let want = naive_expectation(&psi, &sum);
        prop_assert!((CompiledSum::new(&sum).expectation(&psi) - want).abs() < 1e-10);
    }
}

#[test]
fn y_scheme_states_are_real() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let q = rng.gen_range(1..=6);
        let spec = AnsatzSpec::linear(q, rng.gen_range(0..=3), RotationScheme::Y);
        let theta: Vec<f64> = (0..spec.parameter_count())
            .map(|_| rng.gen_range(-7.0..7.0))
            .collect();
        assert!(prepare_state(&spec, &theta).unwrap().max_imag() < 1e-12);
    }
}

#[test]
fn zxz_contains_the_y_scheme() {
    use std::f64::consts::FRAC_PI_2;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (q, d) in [(1, 0), (2, 1), (3, 2), (4, 1)] {
        let y = AnsatzSpec::linear(q, d, RotationScheme::Y);
        let zxz = AnsatzSpec::linear(q, d, RotationScheme::Zxz);
        let angles: Vec<f64> = (0..y.parameter_count())
            .map(|_| rng.gen_range(-3.0..3.0))
            .collect();
        let mut mapped = Vec::new();
        for (k, &a) in angles.iter().enumerate() {
            if k < q {
                mapped.extend([FRAC_PI_2, a]);
            } else {
                mapped.extend([FRAC_PI_2, a, -FRAC_PI_2]);
            }
        }
        let fid = prepare_state(&y, &angles)
            .unwrap()
            .fidelity(&prepare_state(&zxz, &mapped).unwrap());
        assert!((fid - 1.0).abs() < 1e-12, "q={q} d={d}: {fid}");
    }
}

fn random_state_and_sum(qubits: u32, seed: u64) -> (Statevector, PauliSum, f64) {
    let sum = decompose(&random_hamiltonian(qubits, seed), 1e-12).unwrap();
    let spec = AnsatzSpec::linear(qubits as usize, 1, RotationScheme::Y);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
    let theta: Vec<f64> = (0..spec.parameter_count())
        .map(|_| rng.gen_range(-3.0..3.0))
        .collect();
    let psi = prepare_state(&spec, &theta).unwrap();
    let exact = CompiledSum::new(&sum).expectation(&psi);
    (psi, sum, exact)
}

#[test]
fn single_shot_estimates_are_unbiased() {
    let (psi, sum, exact) = random_state_and_sum(3, 42);
    let sampler = GroupedSampler::new(&sum, &group_qubitwise(&sum)).unwrap();
    let n = 10_000;
    let xs: Vec<f64> = (0..n)
        .map(|s| sampler.sample(&psi, 1, s, None).energy)
        .collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!(
        (mean - exact).abs() < 5.0 * se,
        "mean {mean}, exact {exact}, se {se}"
    );
}

#[test]
fn variance_scales_inversely_with_shots() {
    let (psi, sum, _) = random_state_and_sum(3, 9);
    let sampler = GroupedSampler::new(&sum, &group_qubitwise(&sum)).unwrap();
    let variance = |shots: u32| {
        let xs: Vec<f64> = (0..2000)
            .map(|s| {
                sampler
                    .sample(&psi, shots, 1_000_000 * shots as u64 + s, None)
                    .energy
            })
            .collect();
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    };
    let ratio = variance(16) / variance(256);
    // 16× fewer shots; the ratio of two 2000-sample variances is within ±20% comfortably
    assert!((12.0..20.0).contains(&ratio), "variance ratio {ratio}");
}

#[test]
fn spsa_minimizes_a_quadratic() {
    let theta0 = vec![1.0, -0.5, 0.8, 0.3];
    let trace = spsa_minimize(
        |t, _| t.iter().map(|x| x * x).sum(),
        &theta0,
        &SpsaParams::default(),
        25,
    )
    .unwrap();
    let norm = trace.final_theta.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm < 0.1, "‖θ‖ = {norm}");
    assert_eq!(trace.records.len(), 200);
    assert_eq!(trace.window_energies().len(), 25);
}

#[test]
fn spsa_is_deterministic_per_seed() {
    let f = |t: &[f64], _| (t[0] - 0.3).powi(2) + (t[1] + 0.2).powi(2);
    let p = SpsaParams::default();
    let a = spsa_minimize(f, &[0.0, 0.0], &p, 10).unwrap();
    let b = spsa_minimize(f, &[0.0, 0.0], &p, 10).unwrap();
    let c = spsa_minimize(f, &[0.0, 0.0], &SpsaParams { seed: 1, ..p }, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.records[1].theta, c.records[1].theta);
}

#[test]
fn exact_vqe_finds_a_one_qubit_ground_state() {
    let sum = PauliSum::new(
        1,
        vec![
            scm_core::PauliString::parse_label("Z", 1.0).unwrap(),
            scm_core::PauliString::parse_label("X", 1.0).unwrap(),
        ],
    )
    .unwrap();
    let spec = AnsatzSpec::linear(1, 0, RotationScheme::Y);
    let trace = run_vqe(&sum, &spec, &SpsaParams::default(), &VqeOptions::default()).unwrap();
    assert!((trace.mean + 2f64.sqrt()).abs() < 1e-3, "{}", trace.mean);
    assert!(trace.std_dev < 1e-3);
}

#[test]
fn multistart_reports_the_lowest_run() {
    let h = random_hamiltonian(2, 5);
    let sum = decompose(&h, 1e-12).unwrap();
    let spec = AnsatzSpec::linear(2, 1, RotationScheme::Y);
    let spsa = SpsaParams {
        iterations: 100,
        ..SpsaParams::default()
    };
    let multi = run_vqe_multistart(&sum, &spec, &spsa, &VqeOptions::default(), 4).unwrap();
    assert_eq!(multi.runs.len(), 4);
    assert!(multi.runs[0].records[0].theta.iter().all(|&t| t == 0.0));
    assert!(multi.runs[1].records[0].theta.iter().any(|&t| t != 0.0));
    let lowest = multi
        .runs
        .iter()
        .map(|r| r.mean)
        .fold(f64::INFINITY, f64::min);
    assert_eq!(multi.best_trace().mean, lowest);
    assert!(lowest >= exact_ground(&h).energy - 1e-10);
    let again = run_vqe_multistart(&sum, &spec, &spsa, &VqeOptions::default(), 4).unwrap();
    assert_eq!(multi, again);
    assert!(run_vqe_multistart(&sum, &spec, &spsa, &VqeOptions::default(), 0).is_err());
}

#[test]
fn sampled_mode_tracks_exact_mode() {
    let (_, sum, _) = random_state_and_sum(2, 77);
    let spec = AnsatzSpec::linear(2, 1, RotationScheme::Y);
    let spsa = SpsaParams::default();
    let exact = run_vqe(&sum, &spec, &spsa, &VqeOptions::default()).unwrap();
    let options = VqeOptions {
        mode: EnergyMode::sampled_default(),
        ..VqeOptions::default()
    };
    let sampled = run_vqe(&sum, &spec, &spsa, &options).unwrap();
    assert!(sampled.std_dev > 0.0);
    assert!(
        (sampled.mean - exact.mean).abs() < 0.2,
        "{} vs {}",
        sampled.mean,
        exact.mean
    );
}
