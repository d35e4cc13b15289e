use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// 2×2 unitary, row-major.
pub type Gate1 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `R_x(θ) = exp(-iθX/2)`.
pub fn rx(theta: f64) -> Gate1 {
    let (s, c) = libm::sincos(theta / 2.0);
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
        [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
    ]
}

/// `R_y(θ) = exp(-iθY/2)`.
pub fn ry(theta: f64) -> Gate1 {
    let (s, c) = libm::sincos(theta / 2.0);
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

/// `R_z(θ) = exp(-iθZ/2)`.
pub fn rz(theta: f64) -> Gate1 {
    let (s, c) = libm::sincos(theta / 2.0);
    [[Complex64::new(c, -s), ZERO], [ZERO, Complex64::new(c, s)]]
}

pub fn hadamard() -> Gate1 {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    [
        [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
    ]
}

/// `S† = diag(1, -i)`.
pub fn s_dagger() -> Gate1 {
    [[ONE, ZERO], [ZERO, Complex64::new(0.0, -1.0)]]
}

/// Pure state of `qubits` qubits. Qubit 0 (qubit 1 in labels) is the most
/// significant index bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩`.
    pub fn zero(qubits: usize) -> Self {
        let mut amps = vec![ZERO; 1 << qubits];
        amps[0] = ONE;
        Self { qubits, amps }
    }

    /// Wraps amplitudes; the length must be a power of two. Not normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Option<Self> {
        if !amps.len().is_power_of_two() {
            return None;
        }
        Some(Self {
            qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    fn bit(&self, q: usize) -> usize {
        1 << (self.qubits - 1 - q)
    }

    pub fn apply_gate(&mut self, q: usize, g: &Gate1) {
        let bit = self.bit(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = g[0][0] * a0 + g[0][1] * a1;
                self.amps[i | bit] = g[1][0] * a0 + g[1][1] * a1;
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (self.bit(control), self.bit(target));
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.amps.iter().fold(0.0, |m, a| m.max(a.im.abs()))
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`; insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn cnot_truth_table() {
        // |10⟩ -> |11⟩ with control qubit 0
        let mut s = Statevector::zero(2);
        s.apply_gate(0, &rx(PI));
        s.apply_cnot(0, 1);
        let p = s.probabilities();
        assert!((p[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotations_are_unitary_and_norm_preserving() {
        let mut s = Statevector::zero(3);
        for (k, g) in [rx(0.3), ry(-1.1), rz(2.2), hadamard(), s_dagger()]
            .iter()
            .enumerate()
        {
            s.apply_gate(k % 3, g);
            s.apply_cnot(k % 3, (k + 1) % 3);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn ry_pi_flips() {
        let mut s = Statevector::zero(1);
        s.apply_gate(0, &ry(PI));
        let target = Statevector::from_amplitudes(vec![ZERO, ONE]).unwrap();
        assert!((s.fidelity(&target) - 1.0).abs() < 1e-15);
    }
}
