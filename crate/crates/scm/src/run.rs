//! Potential-energy scans and the readout-mitigation experiment.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use scm_core::mitigation::{build_calibration, ReadoutNoiseModel};
use scm_core::pauli::group_qubitwise;
use scm_core::vqe::{
    mix_seed, prepare_state, run_vqe_multistart, AnsatzSpec, CompiledSum, EnergyTrace,
    GroupedSampler, Readout, RotationScheme,
};
use scm_core::PauliSum;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::fcidump::read_fcidump;
use crate::pipeline::Block;

/// Outcome of one bond length.
#[derive(Debug, Clone)]
pub struct GeometryResult {
    pub bond_length: f64,
    pub fixture: PathBuf,
    pub rank: usize,
    pub qubits: u32,
    pub terms: usize,
    pub groups: usize,
    pub padding: f64,
    pub exact_energy: f64,
    pub best_restart: usize,
    pub restart_means: Vec<f64>,
    pub trace: EnergyTrace,
    pub seconds: f64,
}

impl GeometryResult {
    pub fn mean(&self) -> f64 {
        self.trace.mean
    }

    pub fn std_dev(&self) -> f64 {
        self.trace.std_dev
    }

    pub fn error_kcal(&self) -> f64 {
        (self.trace.mean - self.exact_energy) * scm_core::HARTREE_TO_KCAL_PER_MOL
    }
}

/// Per-geometry seed so concurrent optimizations are independent.
pub fn geometry_seed(base: u64, index: usize) -> u64 {
    if index == 0 {
        base
    } else {
        mix_seed(base ^ mix_seed(index as u64))
    }
}

/// Builds the Hamiltonian for one bond length and optimizes it.
pub fn run_geometry(cfg: &RunConfig, index: usize) -> Result<GeometryResult> {
    let start = Instant::now();
    let bond_length = cfg.molecule.bond_lengths[index];
    let group = cfg.molecule.group()?;
    let fixture = cfg.molecule.fixture_path(bond_length);
    let (header, ints) = read_fcidump(&fixture, group)?;
    let constraints = cfg
        .symmetry
        .constraints()
        .resolve_with_defaults(&header, group)?;
    let block = Block::build(&ints, &constraints, cfg.hamiltonian.padding.padding())?;
    if block.padding_below_ground {
        log::warn!(
            "R = {bond_length:.2}: padding {:.6} is not above the block ground state {:.6}",
            block.padding,
            block.ground.energy
        );
    }
    let sum = block.pauli(cfg.hamiltonian.cutoff)?;
    let groups = group_qubitwise(&sum).len();
    let spec = cfg.ansatz.spec(block.qubits as usize)?;
    let mut spsa = cfg.spsa.params();
    spsa.seed = geometry_seed(cfg.spsa.seed, index);
    let mut options = cfg.vqe_options(block.qubits as usize)?;
    options.sampling_seed = geometry_seed(cfg.estimator.seed, index);
    let multi = run_vqe_multistart(&sum, &spec, &spsa, &options, cfg.spsa.restarts)?;
    let restart_means = multi.runs.iter().map(|t| t.mean).collect();
    let best_restart = multi.best;
    let trace = multi
        .runs
        .into_iter()
        .nth(best_restart)
        .expect("best index is in range");
    Ok(GeometryResult {
        bond_length,
        fixture,
        rank: block.basis.rank(),
        qubits: block.qubits,
        terms: sum.len(),
        groups,
        padding: block.padding,
        exact_energy: block.ground.energy,
        best_restart,
        restart_means,
        trace,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every bond length concurrently, calling `on_done` as each one
/// finishes. Results are returned in ascending bond-length order.
pub fn run_scan<F>(cfg: &RunConfig, on_done: F) -> Result<Vec<GeometryResult>>
where
    F: Fn(&GeometryResult) -> Result<()> + Sync,
{
    cfg.validate()?;
    let mut results = (0..cfg.molecule.bond_lengths.len())
        .into_par_iter()
        .map(|i| {
            let r = run_geometry(cfg, i)?;
            on_done(&r)?;
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(|a, b| a.bond_length.total_cmp(&b.bond_length));
    Ok(results)
}

/// Exact energy at the grid point with the lowest exact energy.
pub fn equilibrium_energy(results: &[GeometryResult]) -> Option<f64> {
    results
        .iter()
        .map(|r| r.exact_energy)
        .min_by(f64::total_cmp)
}

/// Paired raw/corrected estimates for random trial states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MitigationTrials {
    /// Exact energy of the trial state.
    pub exact_energy: f64,
    pub trials: usize,
    /// Trials where the corrected estimate is strictly closer to the exact energy.
    pub wins: usize,
    pub raw_mean_abs_error: f64,
    pub corrected_mean_abs_error: f64,
    pub fallbacks: usize,
}

impl MitigationTrials {
    pub fn win_rate(&self) -> f64 {
        self.wins as f64 / self.trials as f64
    }
}

/// Settings for [`mitigation_trials`].
#[derive(Debug, Clone, PartialEq)]
pub struct MitigationExperiment {
    pub noise: ReadoutNoiseModel,
    pub depth: usize,
    pub shots: u32,
    pub calibration_shots: u32,
    pub trials: usize,
    pub seed: u64,
}

/// Draws one random Y-scheme state from `seed`, then for each trial builds
/// a fresh calibration, samples every measurement group once through the
/// noisy readout, and evaluates the energy both from the raw counts and
/// after correction. Raw and corrected estimates share the same samples.
pub fn mitigation_trials(sum: &PauliSum, exp: &MitigationExperiment) -> Result<MitigationTrials> {
    let qubits = sum.qubits() as usize;
    if exp.noise.qubits() != qubits {
        return Err(CliError::Config(
            "noise model and Hamiltonian differ in qubit count".into(),
        ));
    }
    if exp.trials == 0 || exp.shots == 0 || exp.calibration_shots == 0 {
        return Err(CliError::Config(
            "trials and shot counts must be positive".into(),
        ));
    }
    let groups = group_qubitwise(sum);
    let sampler = GroupedSampler::new(sum, &groups)?;
    let spec = AnsatzSpec::linear(qubits, exp.depth, RotationScheme::Y);
    let mut rng = ChaCha8Rng::seed_from_u64(exp.seed);
    let theta: Vec<f64> = (0..spec.parameter_count())
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    let state = prepare_state(&spec, &theta)?;
    let reference = CompiledSum::new(sum).expectation(&state);

    let per_trial = (0..exp.trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, f64, usize)> {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(exp.seed ^ mix_seed(t as u64)));
            let cal = build_calibration(&exp.noise, exp.calibration_shots, rng.gen())?;
            let sample_seed: u64 = rng.gen();
            let raw = sampler.sample(
                &state,
                exp.shots,
                sample_seed,
                Some(Readout {
                    noise: &exp.noise,
                    mitigator: None,
                }),
            );
            let (corrected, fallbacks) = match cal.mitigator() {
                Ok(m) => {
                    let est = sampler.sample(
                        &state,
                        exp.shots,
                        sample_seed,
                        Some(Readout {
                            noise: &exp.noise,
                            mitigator: Some(&m),
                        }),
                    );
                    (est.energy, est.mitigation_fallbacks)
                }
                Err(_) => (raw.energy, groups.len()),
            };
            Ok((
                (raw.energy - reference).abs(),
                (corrected - reference).abs(),
                fallbacks,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = per_trial.len() as f64;
    Ok(MitigationTrials {
        exact_energy: reference,
        trials: per_trial.len(),
        wins: per_trial.iter().filter(|(r, c, _)| c < r).count(),
        raw_mean_abs_error: per_trial.iter().map(|t| t.0).sum::<f64>() / n,
        corrected_mean_abs_error: per_trial.iter().map(|t| t.1).sum::<f64>() / n,
        fallbacks: per_trial.iter().map(|t| t.2).sum(),
    })
}
