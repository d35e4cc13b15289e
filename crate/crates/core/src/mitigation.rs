//! Synthetic readout noise and calibration-matrix mitigation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{condition_number, Lu};

/// Calibrations with a larger 1-norm condition number are rejected.
pub const MAX_CONDITION: f64 = 1e8;

/// Independent per-qubit readout flips.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutNoiseModel {
    /// `p(read 1 | true 0)` per qubit, qubit 1 first.
    pub p1_given_0: Vec<f64>,
    /// `p(read 0 | true 1)` per qubit.
    pub p0_given_1: Vec<f64>,
}

impl ReadoutNoiseModel {
    pub fn new(p1_given_0: Vec<f64>, p0_given_1: Vec<f64>) -> Result<Self> {
        if p1_given_0.len() != p0_given_1.len() {
            return Err(Error::Size(
                "flip probability lists differ in length".into(),
            ));
        }
        if p1_given_0
            .iter()
            .chain(&p0_given_1)
            .any(|p| !(0.0..0.5).contains(p))
        {
            return Err(Error::Domain("flip probabilities must lie in [0, 0.5)"));
        }
        Ok(Self {
            p1_given_0,
            p0_given_1,
        })
    }

    pub fn noiseless(qubits: usize) -> Self {
        Self::symmetric(qubits, 0.0).expect("zero is a valid probability")
    }

    pub fn symmetric(qubits: usize, flip: f64) -> Result<Self> {
        Self::new(vec![flip; qubits], vec![flip; qubits])
    }

    pub fn qubits(&self) -> usize {
        self.p1_given_0.len()
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1_given_0
            .iter()
            .chain(&self.p0_given_1)
            .all(|&p| p == 0.0)
    }

    /// Passes one ideal outcome through the readout channel.
    pub fn apply<R: Rng + ?Sized>(&self, outcome: usize, rng: &mut R) -> usize {
        let n = self.qubits();
        let mut out = outcome;
        for q in 0..n {
            let bit = 1usize << (n - 1 - q);
            let p = if outcome & bit == 0 {
                self.p1_given_0[q]
            } else {
                self.p0_given_1[q]
            };
            if p > 0.0 && rng.gen_bool(p) {
                out ^= bit;
            }
        }
        out
    }

    /// Exact confusion matrix: the tensor product of single-qubit channels.
    pub fn analytic_confusion(&self) -> ConfusionMatrix {
        let n = self.qubits();
        let dim = 1usize << n;
        let mut data = vec![0.0; dim * dim];
        for prepared in 0..dim {
            for measured in 0..dim {
                let mut p = 1.0;
                for q in 0..n {
                    let bit = 1usize << (n - 1 - q);
                    let (t, m) = (prepared & bit != 0, measured & bit != 0);
                    p *= match (t, m) {
                        (false, false) => 1.0 - self.p1_given_0[q],
                        (false, true) => self.p1_given_0[q],
                        (true, false) => self.p0_given_1[q],
                        (true, true) => 1.0 - self.p0_given_1[q],
                    };
                }
                data[measured * dim + prepared] = p;
            }
        }
        ConfusionMatrix { dim, data }
    }
}

/// Column-stochastic matrix; entry `(m, p)` is the probability of reading
/// basis state `m` after preparing basis state `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl ConfusionMatrix {
    /// Validates column sums (within 1e-9) and the entry range.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim || !dim.is_power_of_two() {
            return Err(Error::Size(format!(
                "confusion matrix needs a power-of-two dimension and {} entries",
                dim * dim
            )));
        }
        if data.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Domain("confusion entries must be probabilities"));
        }
        for col in 0..dim {
            let s: f64 = (0..dim).map(|row| data[row * dim + col]).sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::Domain("confusion matrix columns must sum to 1"));
            }
        }
        Ok(Self { dim, data })
    }

    pub fn identity(qubits: usize) -> Self {
        ReadoutNoiseModel::noiseless(qubits).analytic_confusion()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, measured: usize, prepared: usize) -> f64 {
        self.data[measured * self.dim + prepared]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `self · p`.
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|m| (0..self.dim).map(|j| self.get(m, j) * p[j]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Factorizes the matrix once for repeated corrections.
    pub fn mitigator(&self) -> Result<Mitigator> {
        let condition = condition_number(self.dim, &self.data);
        if condition > MAX_CONDITION {
            return Err(Error::IllConditioned { condition });
        }
        let lu = Lu::factor(self.dim, &self.data).ok_or(Error::IllConditioned {
            condition: f64::INFINITY,
        })?;
        Ok(Mitigator { dim: self.dim, lu })
    }
}

/// Prepared inverse of a calibration matrix.
#[derive(Debug, Clone)]
pub struct Mitigator {
    dim: usize,
    lu: Lu,
}

impl Mitigator {
    /// Unconstrained solution of `cal · x = measured`.
    pub fn solve_raw(&self, measured: &[f64]) -> Vec<f64> {
        self.lu.solve(measured)
    }

    /// Solves `cal · x = measured`, clips to `[0, 1]` and renormalizes.
    pub fn correct(&self, measured: &[f64]) -> Result<Vec<f64>> {
        check_distribution(measured, self.dim)?;
        let mut x = self.solve_raw(measured);
        x.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        let total: f64 = x.iter().sum();
        if total <= 0.0 {
            return Err(Error::Domain(
                "corrected distribution vanished after clipping",
            ));
        }
        x.iter_mut().for_each(|v| *v /= total);
        Ok(x)
    }
}

fn check_distribution(p: &[f64], dim: usize) -> Result<()> {
    if p.len() != dim {
        return Err(Error::Size(format!(
            "probability vector of length {} does not match calibration dimension {dim}",
            p.len()
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::Domain("measured probabilities must sum to 1"));
    }
    Ok(())
}

/// Corrects measured probabilities with the inverse of `cal`, then clips
/// negative entries and renormalizes.
pub fn correct(measured: &[f64], cal: &ConfusionMatrix) -> Result<Vec<f64>> {
    check_distribution(measured, cal.dim())?;
    cal.mitigator()?.correct(measured)
}

/// Like [`correct`] but falls back to the uncorrected input, returning the
/// reason alongside.
pub fn correct_or_passthrough(
    measured: &[f64],
    cal: &ConfusionMatrix,
) -> (Vec<f64>, Option<Error>) {
    match correct(measured, cal) {
        Ok(p) => (p, None),
        Err(e) => (measured.to_vec(), Some(e)),
    }
}

/// Empirical confusion matrix from `shots` noisy readouts of every
/// computational basis state.
pub fn build_calibration(
    model: &ReadoutNoiseModel,
    shots: u32,
    seed: u64,
) -> Result<ConfusionMatrix> {
    if shots == 0 {
        return Err(Error::Domain("calibration needs at least one shot"));
    }
    let dim = 1usize << model.qubits();
    let mut data = vec![0.0; dim * dim];
    let mut counts = vec![0u32; dim];
    for prepared in 0..dim {
        // one stream per preparation keeps columns independent of each other
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(prepared as u64);
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..shots {
            counts[model.apply(prepared, &mut rng)] += 1;
        }
        for (m, &c) in counts.iter().enumerate() {
            data[m * dim + prepared] = c as f64 / shots as f64;
        }
    }
    Ok(ConfusionMatrix { dim, data })
}
