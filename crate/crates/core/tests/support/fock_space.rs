//! Dense second-quantized operators on the full Fock space of a handful of
//! spin-orbitals, built straight from the Jordan–Wigner definition
//! `a_j |n⟩ = (-1)^(Σ_{k<j} n_k) |n - e_j⟩`. Spin-orbital `p` is alpha
//! orbital `p` for `p < norb` and beta orbital `p - norb` otherwise.

#![allow(dead_code)]

use scm_core::IntegralSet;

#[derive(Clone, Copy)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

/// Applies a product of ladder operators (rightmost first) to occupation
/// state `s`. Returns the sign and resulting state, or `None` if it vanishes.
pub fn apply(ops: &[Ladder], s: usize) -> Option<(f64, usize)> {
    let mut state = s;
    let mut sign = 1.0;
    for op in ops.iter().rev() {
        let (j, want_occupied) = match *op {
            Ladder::Create(j) => (j, false),
            Ladder::Annihilate(j) => (j, true),
        };
        if (state >> j & 1 == 1) != want_occupied {
            return None;
        }
        if (state & ((1 << j) - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        state ^= 1 << j;
    }
    Some((sign, state))
}

/// Row-major `2^n × 2^n` operator.
pub struct Operator {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Operator {
    pub fn zeros(n_spin_orbitals: usize) -> Self {
        let dim = 1 << n_spin_orbitals;
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn get(&self, bra: usize, ket: usize) -> f64 {
        self.data[bra * self.dim + ket]
    }

    /// Adds `coeff · ops`.
    pub fn add_string(&mut self, coeff: f64, ops: &[Ladder]) {
        for s in 0..self.dim {
            if let Some((sign, t)) = apply(ops, s) {
                self.data[t * self.dim + s] += coeff * sign;
            }
        }
    }

    pub fn add_identity(&mut self, coeff: f64) {
        for s in 0..self.dim {
            self.data[s * self.dim + s] += coeff;
        }
    }
}

/// `E_c + Σ h_pq a†_pσ a_qσ + ½ Σ (pq|rs) a†_pσ a†_rτ a_sτ a_qσ`.
pub fn hamiltonian(ints: &IntegralSet) -> Operator {
    use Ladder::*;
    let norb = ints.norb();
    let mut h = Operator::zeros(2 * norb);
    h.add_identity(ints.constant);
    let so = |p: usize, spin: usize| p + spin * norb;
    for p in 0..norb {
        for q in 0..norb {
            let v = ints.one(p, q);
            if v == 0.0 {
                continue;
            }
            for s in 0..2 {
                h.add_string(v, &[Create(so(p, s)), Annihilate(so(q, s))]);
            }
        }
    }
    for p in 0..norb {
        for q in 0..norb {
            for r in 0..norb {
                for s in 0..norb {
                    let v = ints.two(p, q, r, s);
                    if v == 0.0 {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            h.add_string(
                                0.5 * v,
                                &[
                                    Create(so(p, sigma)),
                                    Create(so(r, tau)),
                                    Annihilate(so(s, tau)),
                                    Annihilate(so(q, sigma)),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }
    h
}

/// `Ŝ² = Ŝ₋Ŝ₊ + Ŝz² + Ŝz` with `Ŝ₊ = Σ_p a†_pα a_pβ`.
pub fn s_squared(norb: usize) -> Operator {
    use Ladder::*;
    let mut op = Operator::zeros(2 * norb);
    // Ŝ₋Ŝ₊ = Σ_pq a†_qβ a_qα a†_pα a_pβ
    for p in 0..norb {
        for q in 0..norb {
            op.add_string(
                1.0,
                &[
                    Create(q + norb),
                    Annihilate(q),
                    Create(p),
                    Annihilate(p + norb),
                ],
            );
        }
    }
    for s in 0..op.dim {
        let na = (s & ((1 << norb) - 1)).count_ones() as f64;
        let nb = (s >> norb).count_ones() as f64;
        let sz = 0.5 * (na - nb);
        op.data[s * op.dim + s] += sz * sz + sz;
    }
    op
}
