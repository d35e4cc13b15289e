//! Variational quantum eigensolver on a simulated statevector.
//!
//! [`run_vqe`] ties the pieces together: the ansatz prepares a trial state,
//! the energy is either evaluated exactly or estimated from sampled
//! measurement groups (optionally through a noisy readout channel and its
//! calibration-matrix inverse), and SPSA updates the parameters.

mod ansatz;
mod estimate;
mod spsa;
mod statevector;

pub use ansatz::{linear_chain, parameter_count, prepare_state, AnsatzSpec, RotationScheme};
pub use estimate::{
    expectation_exact, sample_energy, CompiledSum, GroupedSampler, Readout, SampledEnergy,
};
pub use spsa::{mean_std, spsa_minimize, EnergyTrace, Evaluation, IterationRecord, SpsaParams};
pub use statevector::{hadamard, rx, ry, rz, s_dagger, Gate1, Statevector};

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mitigation::{build_calibration, Mitigator, ReadoutNoiseModel};
use crate::pauli::{group_qubitwise, PauliSum};

/// How energies are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMode {
    /// Exact expectation values of the simulated state.
    Exact,
    /// Shot sampling per measurement group.
    Sampled {
        /// Shots per group for each perturbed evaluation.
        perturbed_shots: u32,
        /// Shots per group for each current-parameter window evaluation.
        window_shots: u32,
    },
}

impl EnergyMode {
    pub fn sampled_default() -> Self {
        EnergyMode::Sampled {
            perturbed_shots: 1024,
            window_shots: 8192,
        }
    }
}

/// Synthetic readout noise and, optionally, its mitigation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutConfig {
    pub noise: ReadoutNoiseModel,
    pub mitigate: bool,
    pub calibration_shots: u32,
    /// Calibration is rebuilt at iteration 0 and every this many iterations.
    pub refresh_every: usize,
}

impl ReadoutConfig {
    pub fn new(noise: ReadoutNoiseModel) -> Self {
        Self {
            noise,
            mitigate: true,
            calibration_shots: 8192,
            refresh_every: 10,
        }
    }
}

/// Everything besides the Hamiltonian, ansatz and SPSA constants.
#[derive(Debug, Clone, PartialEq)]
pub struct VqeOptions {
    pub mode: EnergyMode,
    pub readout: Option<ReadoutConfig>,
    /// Iterations at the end whose current-parameter energies are averaged.
    pub window: usize,
    /// Seed for measurement sampling and calibration.
    pub sampling_seed: u64,
    /// Starting parameters; all zeros when `None`.
    pub initial: Option<Vec<f64>>,
}

impl Default for VqeOptions {
    fn default() -> Self {
        Self {
            mode: EnergyMode::Exact,
            readout: None,
            window: 25,
            sampling_seed: 0,
            initial: None,
        }
    }
}

/// Independent SPSA runs from different starting points.
///
/// Run 0 starts from `options.initial` (or zeros); run `r > 0` starts from
/// angles drawn uniformly from `[-π, π)`. Each run gets its own SPSA and
/// sampling seeds. The run with the lowest window mean is reported.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiStart {
    pub runs: Vec<EnergyTrace>,
    pub best: usize,
}

impl MultiStart {
    pub fn best_trace(&self) -> &EnergyTrace {
        &self.runs[self.best]
    }
}

pub fn run_vqe_multistart(
    hamiltonian: &PauliSum,
    spec: &AnsatzSpec,
    spsa: &SpsaParams,
    options: &VqeOptions,
    restarts: usize,
) -> Result<MultiStart> {
    if restarts == 0 {
        return Err(Error::Domain("at least one start is required"));
    }
    let mut runs = Vec::with_capacity(restarts);
    for r in 0..restarts {
        let mut params = *spsa;
        let mut opts = options.clone();
        if r > 0 {
            params.seed = mix_seed(spsa.seed ^ mix_seed(r as u64));
            opts.sampling_seed = mix_seed(options.sampling_seed ^ mix_seed(!(r as u64)));
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(spsa.seed.rotate_left(17) ^ r as u64));
            opts.initial = Some(
                (0..spec.parameter_count())
                    .map(|_| rng.gen_range(-core::f64::consts::PI..core::f64::consts::PI))
                    .collect(),
            );
        }
        runs.push(run_vqe(hamiltonian, spec, &params, &opts)?);
    }
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.mean.total_cmp(&b.1.mean))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(MultiStart { runs, best })
}

/// SplitMix64 finalizer, used to derive independent per-evaluation seeds.
pub fn mix_seed(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn evaluation_seed(base: u64, eval: Evaluation) -> u64 {
    let (tag, k) = match eval {
        Evaluation::Plus(k) => (1u64, k),
        Evaluation::Minus(k) => (2, k),
        Evaluation::Current(k) => (3, k),
    };
    mix_seed(mix_seed(base ^ tag.rotate_left(56)) ^ k as u64)
}

/// Optimizes `spec` against `hamiltonian` and returns the SPSA trace.
///
/// Deterministic for fixed `spsa.seed` and `options.sampling_seed`.
pub fn run_vqe(
    hamiltonian: &PauliSum,
    spec: &AnsatzSpec,
    spsa: &SpsaParams,
    options: &VqeOptions,
) -> Result<EnergyTrace> {
    if hamiltonian.qubits() as usize != spec.qubits {
        return Err(Error::Size(alloc::format!(
            "Hamiltonian acts on {} qubits, ansatz on {}",
            hamiltonian.qubits(),
            spec.qubits
        )));
    }
    let n_params = spec.parameter_count();
    let theta0 = match &options.initial {
        Some(t) if t.len() != n_params => {
            return Err(Error::Arity {
                expected: n_params,
                got: t.len(),
            })
        }
        Some(t) => t.clone(),
        None => vec![0.0; n_params],
    };
    if let Some(r) = &options.readout {
        if r.noise.qubits() != spec.qubits {
            return Err(Error::Size(
                "readout model qubit count differs from ansatz".into(),
            ));
        }
        if r.refresh_every == 0 || r.calibration_shots == 0 {
            return Err(Error::Domain(
                "calibration cadence and shots must be positive",
            ));
        }
    }

    match options.mode {
        EnergyMode::Exact => {
            let compiled = CompiledSum::new(hamiltonian);
            spsa_minimize(
                |theta, _| {
                    let state = prepare_state(spec, theta).expect("arity checked");
                    compiled.expectation(&state)
                },
                &theta0,
                spsa,
                options.window,
            )
        }
        EnergyMode::Sampled {
            perturbed_shots,
            window_shots,
        } => {
            if perturbed_shots == 0 || window_shots == 0 {
                return Err(Error::Domain("shot counts must be positive"));
            }
            let groups = group_qubitwise(hamiltonian);
            let sampler = GroupedSampler::new(hamiltonian, &groups)?;
            let mut mitigator: Option<Mitigator> = None;
            let mut calibrated_at: Option<usize> = None;
            let mut fallbacks = 0usize;
            let base = options.sampling_seed;
            let mut trace = spsa_minimize(
                |theta, eval| {
                    let k = eval.iteration();
                    if let Some(r) = &options.readout {
                        let due = k % r.refresh_every == 0 && calibrated_at != Some(k);
                        if r.mitigate && (calibrated_at.is_none() || due) {
                            let seed = mix_seed(base ^ 0xCA11_B4A7 ^ mix_seed(k as u64));
                            mitigator = build_calibration(&r.noise, r.calibration_shots, seed)
                                .and_then(|cal| cal.mitigator())
                                .ok();
                            if mitigator.is_none() {
                                fallbacks += 1;
                            }
                            calibrated_at = Some(k);
                        }
                    }
                    let state = prepare_state(spec, theta).expect("arity checked");
                    let shots = match eval {
                        Evaluation::Current(_) => window_shots,
                        _ => perturbed_shots,
                    };
                    let readout = options.readout.as_ref().map(|r| Readout {
                        noise: &r.noise,
                        mitigator: if r.mitigate { mitigator.as_ref() } else { None },
                    });
                    let est = sampler.sample(&state, shots, evaluation_seed(base, eval), readout);
                    fallbacks += est.mitigation_fallbacks;
                    est.energy
                },
                &theta0,
                spsa,
                options.window,
            )?;
            trace.mitigation_fallbacks = fallbacks;
            Ok(trace)
        }
    }
}
