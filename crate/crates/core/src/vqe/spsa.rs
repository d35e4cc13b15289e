//! Simultaneous perturbation stochastic approximation.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Gain constants and run length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpsaParams {
    pub a: f64,
    /// Stability constant `A`.
    pub big_a: f64,
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub iterations: usize,
    /// Seed of the perturbation-direction generator.
    pub seed: u64,
}

impl Default for SpsaParams {
    fn default() -> Self {
        Self {
            a: 1.2,
            big_a: 20.0,
            c: 0.06,
            alpha: 0.602,
            gamma: 0.101,
            iterations: 200,
            seed: 0,
        }
    }
}

impl SpsaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.c > 0.0) {
            return Err(Error::Domain("SPSA gains a and c must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0 && self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Domain("SPSA exponents must lie in (0, 1]"));
        }
        if self.big_a < 0.0 {
            return Err(Error::Domain(
                "SPSA stability constant must be non-negative",
            ));
        }
        Ok(())
    }

    /// Step size `a_k = a / (k + 1 + A)^α`.
    pub fn step_gain(&self, k: usize) -> f64 {
        self.a / libm::pow(k as f64 + 1.0 + self.big_a, self.alpha)
    }

    /// Perturbation size `c_k = c / (k + 1)^γ`.
    pub fn perturbation_gain(&self, k: usize) -> f64 {
        self.c / libm::pow(k as f64 + 1.0, self.gamma)
    }
}

/// What an objective call is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    /// `θ_k + c_k Δ_k`.
    Plus(usize),
    /// `θ_k - c_k Δ_k`.
    Minus(usize),
    /// `θ_k` itself, evaluated during the final window.
    Current(usize),
}

impl Evaluation {
    pub fn iteration(self) -> usize {
        match self {
            Evaluation::Plus(k) | Evaluation::Minus(k) | Evaluation::Current(k) => k,
        }
    }
}

/// One SPSA iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Parameters `θ_k` at the start of the iteration.
    pub theta: Vec<f64>,
    pub energy_plus: f64,
    pub energy_minus: f64,
    /// Energy at `θ_k`, present for the final window only.
    pub energy_current: Option<f64>,
}

/// Full optimization history.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace {
    pub records: Vec<IterationRecord>,
    pub final_theta: Vec<f64>,
    /// Mean of the window energies.
    pub mean: f64,
    /// Population standard deviation of the window energies.
    pub std_dev: f64,
    /// Readout corrections that fell back to raw frequencies.
    pub mitigation_fallbacks: usize,
}

impl EnergyTrace {
    pub fn window_energies(&self) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| r.energy_current)
            .collect()
    }
}

/// Mean and population standard deviation; `(NaN, NaN)` for no samples.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var))
}

/// Minimizes `objective` from `theta0`.
///
/// Each iteration draws one Rademacher direction `Δ`, evaluates the
/// objective at `θ ± c_k Δ` and steps `θ ← θ - a_k ĝ` with
/// `ĝ_i = (f+ - f-) / (2 c_k Δ_i)`. In the last `window` iterations the
/// objective is also evaluated at `θ_k`; the trace reports the mean and
/// spread of those values.
pub fn spsa_minimize<F>(
    mut objective: F,
    theta0: &[f64],
    params: &SpsaParams,
    window: usize,
) -> Result<EnergyTrace>
where
    F: FnMut(&[f64], Evaluation) -> f64,
{
    params.validate()?;
    if window > params.iterations {
        return Err(Error::Domain(
            "averaging window exceeds the iteration count",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut theta = theta0.to_vec();
    let dim = theta.len();
    let mut delta = alloc::vec![0.0; dim];
    let mut probe = alloc::vec![0.0; dim];
    let mut records = Vec::with_capacity(params.iterations);
    let window_start = params.iterations - window;

    for k in 0..params.iterations {
        let ak = params.step_gain(k);
        let ck = params.perturbation_gain(k);
        for d in delta.iter_mut() {
            *d = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        }
        let current = (k >= window_start).then(|| objective(&theta, Evaluation::Current(k)));

        for i in 0..dim {
            probe[i] = theta[i] + ck * delta[i];
        }
        let plus = objective(&probe, Evaluation::Plus(k));
        for i in 0..dim {
            probe[i] = theta[i] - ck * delta[i];
        }
        let minus = objective(&probe, Evaluation::Minus(k));

        records.push(IterationRecord {
            iteration: k,
            theta: theta.clone(),
            energy_plus: plus,
            energy_minus: minus,
            energy_current: current,
        });

        let diff = (plus - minus) / (2.0 * ck);
        for i in 0..dim {
            theta[i] -= ak * diff / delta[i];
        }
    }

    let window_values: Vec<f64> = records.iter().filter_map(|r| r.energy_current).collect();
    let (mean, std_dev) = mean_std(&window_values);
    Ok(EnergyTrace {
        records,
        final_theta: theta,
        mean,
        std_dev,
        mitigation_fallbacks: 0,
    })
}
