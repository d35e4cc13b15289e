//! Energy of a trial state: exact Pauli expectations and shot-sampled
//! estimates from qubit-wise commuting measurement groups.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::statevector::{hadamard, s_dagger, Statevector};
use crate::error::{Error, Result};
use crate::linalg::DenseHamiltonian;
use crate::mitigation::{Mitigator, ReadoutNoiseModel};
use crate::pauli::{MeasurementGroup, PauliMasks, PauliOp, PauliSum};

/// Pauli sum reduced to symplectic masks for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledSum {
    qubits: usize,
    identity: f64,
    terms: Vec<(PauliMasks, f64)>,
    /// Dense matrix for small real sums, where it beats the term loop.
    dense: Option<DenseHamiltonian>,
}

const DENSE_MAX_QUBITS: u32 = 8;

impl CompiledSum {
    pub fn new(sum: &PauliSum) -> Self {
        Self {
            qubits: sum.qubits() as usize,
            identity: sum.identity_coeff(),
            terms: sum
                .terms()
                .iter()
                .filter(|t| !t.is_identity())
                .map(|t| (t.masks(), t.coeff))
                .collect(),
            dense: (sum.qubits() <= DENSE_MAX_QUBITS)
                .then(|| sum.reconstruct().ok())
                .flatten(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// `⟨ψ|H|ψ⟩`, real part. Panics in debug builds if the imaginary
    /// residue exceeds 1e-10.
    pub fn expectation(&self, state: &Statevector) -> f64 {
        assert_eq!(state.qubits(), self.qubits, "qubit count mismatch");
        let amps = state.amplitudes();
        if let Some(h) = &self.dense {
            let mut total = 0.0;
            for (i, ai) in amps.iter().enumerate() {
                let mut row = Complex64::new(0.0, 0.0);
                for (hij, aj) in h.row(i).iter().zip(amps) {
                    row += aj * *hij;
                }
                total += (ai.conj() * row).re;
            }
            return total;
        }
        let mut total = Complex64::new(self.identity * state.norm_sqr(), 0.0);
        for (m, c) in &self.terms {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, a) in amps.iter().enumerate() {
                let v = amps[j ^ m.x as usize].conj() * a;
                if (j as u64 & m.z).count_ones().is_multiple_of(2) {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
            let phase = match m.y_count() % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            total += phase * acc * *c;
        }
        debug_assert!(
            total.im.abs() < 1e-10,
            "imaginary energy residue {}",
            total.im
        );
        total.re
    }
}

/// `Σ_P c_P ⟨ψ|P|ψ⟩`.
pub fn expectation_exact(state: &Statevector, sum: &PauliSum) -> f64 {
    CompiledSum::new(sum).expectation(state)
}

/// Readout channel applied to sampled outcomes, and optionally its inverse.
#[derive(Debug, Clone, Copy)]
pub struct Readout<'a> {
    pub noise: &'a ReadoutNoiseModel,
    pub mitigator: Option<&'a Mitigator>,
}

/// Shot-sampled energy estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledEnergy {
    pub energy: f64,
    /// Groups whose mitigation failed and used uncorrected frequencies.
    pub mitigation_fallbacks: usize,
}

/// Measurement groups prepared for sampling: basis-change gates and the
/// parity mask of each member.
#[derive(Debug, Clone)]
pub struct GroupedSampler {
    qubits: usize,
    identity: f64,
    groups: Vec<PreparedGroup>,
}

#[derive(Debug, Clone)]
struct PreparedGroup {
    basis: Vec<PauliOp>,
    /// (support mask, coefficient) for every non-identity member.
    members: Vec<(u64, f64)>,
}

impl GroupedSampler {
    pub fn new(sum: &PauliSum, groups: &[MeasurementGroup]) -> Result<Self> {
        let n = sum.qubits() as usize;
        let mut seen = vec![false; sum.len()];
        let mut prepared = Vec::with_capacity(groups.len());
        for g in groups {
            if g.basis.len() != n {
                return Err(Error::Size(
                    "measurement basis length differs from qubit count".into(),
                ));
            }
            let mut members = Vec::new();
            for &i in &g.members {
                let term = sum
                    .terms()
                    .get(i)
                    .ok_or_else(|| Error::Size("group member index out of range".into()))?;
                if core::mem::replace(&mut seen[i], true) {
                    return Err(Error::Size("term assigned to more than one group".into()));
                }
                if term.is_identity() {
                    continue;
                }
                if !crate::pauli::qubitwise_commute(&term.ops, &g.basis) {
                    return Err(Error::Size("term incompatible with its group basis".into()));
                }
                let m = term.masks();
                members.push((m.x | m.z, term.coeff));
            }
            prepared.push(PreparedGroup {
                basis: g.basis.clone(),
                members,
            });
        }
        if let Some(i) = seen
            .iter()
            .enumerate()
            .position(|(i, &s)| !s && !sum.terms()[i].is_identity())
        {
            return Err(Error::Size(alloc::format!("term {i} is not in any group")));
        }
        Ok(Self {
            qubits: n,
            identity: sum.identity_coeff(),
            groups: prepared,
        })
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    /// Estimates the energy with `shots` samples per group. Group `g` draws
    /// from stream `g` of a generator seeded with `seed`, so the result does
    /// not depend on the order groups are evaluated in.
    pub fn sample(
        &self,
        state: &Statevector,
        shots: u32,
        seed: u64,
        readout: Option<Readout<'_>>,
    ) -> SampledEnergy {
        assert_eq!(state.qubits(), self.qubits, "qubit count mismatch");
        assert!(shots >= 1, "at least one shot is required");
        let mut energy = self.identity;
        let mut fallbacks = 0;
        let dim = state.dim();
        let mut counts = vec![0u32; dim];
        for (g, group) in self.groups.iter().enumerate() {
            if group.members.is_empty() {
                continue;
            }
            let mut rotated = state.clone();
            for (q, op) in group.basis.iter().enumerate() {
                match op {
                    PauliOp::X => rotated.apply_gate(q, &hadamard()),
                    PauliOp::Y => {
                        rotated.apply_gate(q, &s_dagger());
                        rotated.apply_gate(q, &hadamard());
                    }
                    PauliOp::Z | PauliOp::I => {}
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(g as u64);
            let cdf = cumulative(&rotated.probabilities());
            counts.iter_mut().for_each(|c| *c = 0);
            for _ in 0..shots {
                let mut outcome = draw(&cdf, &mut rng);
                if let Some(r) = readout {
                    outcome = r.noise.apply(outcome, &mut rng);
                }
                counts[outcome] += 1;
            }
            let mut freq: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
            if let Some(m) = readout.and_then(|r| r.mitigator) {
                match m.correct(&freq) {
                    Ok(p) => freq = p,
                    Err(_) => fallbacks += 1,
                }
            }
            for &(support, c) in &group.members {
                let parity: f64 = freq
                    .iter()
                    .enumerate()
                    .map(|(m, p)| {
                        if (m as u64 & support).count_ones().is_multiple_of(2) {
                            *p
                        } else {
                            -*p
                        }
                    })
                    .sum();
                energy += c * parity;
            }
        }
        SampledEnergy {
            energy,
            mitigation_fallbacks: fallbacks,
        }
    }
}

fn cumulative(p: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = p
        .iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect();
    let total = acc;
    cdf.iter_mut().for_each(|c| *c /= total);
    cdf
}

fn draw<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Convenience wrapper over [`GroupedSampler::sample`].
pub fn sample_energy(
    state: &Statevector,
    sum: &PauliSum,
    groups: &[MeasurementGroup],
    shots: u32,
    seed: u64,
    readout: Option<Readout<'_>>,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::Domain("shots must be at least 1"));
    }
    Ok(GroupedSampler::new(sum, groups)?
        .sample(state, shots, seed, readout)
        .energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{group_qubitwise, PauliString};
    use crate::vqe::statevector::ry;

    fn sum(terms: &[(&str, f64)]) -> PauliSum {
        let n = terms[0].0.len() as u32;
        PauliSum::new(
            n,
            terms
                .iter()
                .map(|(l, c)| PauliString::parse_label(l, *c).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn exact_examples() {
        let z = sum(&[("Z", 1.0)]);
        assert_eq!(expectation_exact(&Statevector::zero(1), &z), 1.0);
        let id = sum(&[("II", -3.5)]);
        let mut s = Statevector::zero(2);
        s.apply_gate(0, &ry(0.7));
        assert!((expectation_exact(&s, &id) + 3.5).abs() < 1e-14);
        // Y on R_x(θ)|0⟩ gives -sin θ
        let y = sum(&[("Y", 1.0)]);
        let mut s = Statevector::zero(1);
        s.apply_gate(0, &crate::vqe::statevector::rx(0.4));
        let e = CompiledSum::new(&y);
        // odd-Y terms are Hermitian, the expectation is still real
        assert!((e.expectation(&s) + libm::sin(0.4)).abs() < 1e-14);
    }

    #[test]
    fn sampled_zero_state() {
        let h = sum(&[("ZIII", 1.0)]);
        let groups = group_qubitwise(&h);
        let e = sample_energy(&Statevector::zero(4), &h, &groups, 1024, 5, None).unwrap();
        assert!((e - 1.0).abs() <= 4.0 / 32.0);
        // deterministic outcome: exact
        assert_eq!(e, 1.0);
    }

    #[test]
    fn identity_only_is_exact() {
        let h = sum(&[("II", 0.125)]);
        let groups = group_qubitwise(&h);
        let mut s = Statevector::zero(2);
        s.apply_gate(1, &ry(1.0));
        for shots in [1, 3, 1000] {
            assert_eq!(
                sample_energy(&s, &h, &groups, shots, 9, None).unwrap(),
                0.125
            );
        }
    }

    #[test]
    fn sampler_rejects_bad_groups() {
        let h = sum(&[("XI", 1.0), ("ZI", 1.0)]);
        let bad = [MeasurementGroup {
            members: alloc::vec![0, 1],
            basis: alloc::vec![PauliOp::X, PauliOp::Z],
        }];
        assert!(GroupedSampler::new(&h, &bad).is_err());
        let missing = [MeasurementGroup {
            members: alloc::vec![0],
            basis: alloc::vec![PauliOp::X, PauliOp::Z],
        }];
        assert!(GroupedSampler::new(&h, &missing).is_err());
    }
}
