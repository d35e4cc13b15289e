//! Symmetry configuration bases, qubit requirements, block extraction and
//! the exact ground-state solver.
//!
//! A symmetry configuration `Σ` fixes some of the particle number `N`, the
//! spin projection `Sz` and the spatial irrep `Γ`. The determinants that
//! satisfy it span one invariant block `Ĥ^Σ` of the Hamiltonian. Block
//! state `ℓ` (0-based, canonical order) is mapped to the computational
//! basis state `|bin(ℓ)⟩` on `Q = ⌈log2 Λ⌉` qubits.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fock::{build_matrix, build_s2_matrix, Determinant, IntegralSet, SpinOrbitalBasis};
use crate::linalg::DenseHamiltonian;
use crate::pointgroup::Irrep;

/// Tolerance on `Ŝ²` eigenvalues when counting spin-adapted states.
pub const SPIN_EIGENVALUE_TOLERANCE: f64 = 1e-6;

/// Constraint tuple `Σ = (N, S, Sz, Γ)`; unset entries are unconstrained.
/// Spins are stored doubled (`two_sz = 2·Sz`, `two_s = 2·S`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SymmetryConfiguration {
    pub n: Option<u32>,
    pub two_sz: Option<i32>,
    pub irrep: Option<Irrep>,
    /// Total spin; used for counting only, never for filtering.
    pub two_s: Option<u32>,
}

impl SymmetryConfiguration {
    pub fn unconstrained() -> Self {
        Self::default()
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_two_sz(mut self, two_sz: i32) -> Self {
        self.two_sz = Some(two_sz);
        self
    }

    pub fn with_irrep(mut self, irrep: Irrep) -> Self {
        self.irrep = Some(irrep);
        self
    }

    pub fn with_two_s(mut self, two_s: u32) -> Self {
        self.two_s = Some(two_s);
        self
    }

    pub fn is_unconstrained(&self) -> bool {
        self.n.is_none() && self.two_sz.is_none() && self.irrep.is_none()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(two_s) = self.two_s {
            let Some(two_sz) = self.two_sz else {
                return Err(Error::Configuration("S requires Sz to be set".into()));
            };
            if two_sz.unsigned_abs() > two_s {
                return Err(Error::Configuration(format!(
                    "|Sz| = {} exceeds S = {}",
                    two_sz.unsigned_abs() as f64 / 2.0,
                    two_s as f64 / 2.0
                )));
            }
            if (two_s as i32 - two_sz) % 2 != 0 {
                return Err(Error::Configuration(
                    "S and Sz must differ by an integer".into(),
                ));
            }
        }
        Ok(())
    }

    fn admits(&self, det: &Determinant, basis: &SpinOrbitalBasis) -> bool {
        let q = det.quantum_numbers(basis);
        self.n.is_none_or(|n| q.n == n)
            && self.two_sz.is_none_or(|s| q.two_sz == s)
            && self.irrep.is_none_or(|g| q.irrep == g)
    }
}

/// Canonically ordered determinants of one symmetry configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationBasis {
    pub config: SymmetryConfiguration,
    norb: usize,
    dets: Vec<Determinant>,
}

impl ConfigurationBasis {
    pub fn dets(&self) -> &[Determinant] {
        &self.dets
    }

    pub fn norb(&self) -> usize {
        self.norb
    }

    /// Rank `Λ`.
    pub fn rank(&self) -> usize {
        self.dets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dets.is_empty()
    }

    /// Index `ℓ` of `det`, if present.
    pub fn index_of(&self, det: &Determinant) -> Option<usize> {
        self.dets.binary_search(det).ok()
    }

    pub fn qubits(&self) -> Result<u32> {
        qubit_count(self.rank())
    }

    /// Hamiltonian block `Ĥ^Σ` over this basis.
    pub fn hamiltonian(&self, ints: &IntegralSet) -> Result<DenseHamiltonian> {
        build_matrix(&self.dets, ints)
    }
}

/// Iterates over all `width`-bit masks with exactly `k` bits set, ascending.
fn masks_with_popcount(width: usize, k: u32) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << width;
    let mut next: Option<u64> = if k as usize > width {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(((1u128 << k) - 1) as u64)
    };
    core::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur as u128 + c as u128;
            let n = (((r as u64 ^ cur) >> 2) / c) | r as u64;
            if r >= limit {
                None
            } else {
                Some(n)
            }
        };
        Some(cur)
    })
}

/// Determinants of `basis` satisfying every constraint set in `config`, in
/// ascending `(alpha, beta)` order. Unsatisfiable constraints give an empty
/// basis. The unconstrained case is rejected; use [`count_configurations`].
pub fn enumerate_basis(
    basis: &SpinOrbitalBasis,
    config: &SymmetryConfiguration,
) -> Result<ConfigurationBasis> {
    config.validate()?;
    if config.is_unconstrained() {
        return Err(Error::Configuration(
            "at least one of N, Sz, Γ must be set to enumerate a basis".into(),
        ));
    }
    if let Some(g) = config.irrep {
        if !core::ptr::eq(g.group(), basis.point_group()) && basis.norb() > 0 {
            return Err(Error::MismatchedGroups(
                g.group().name,
                basis.point_group().name,
            ));
        }
    }
    let norb = basis.norb();
    let mut dets = Vec::new();
    let max = norb as u32;
    // every (n_alpha, n_beta) split compatible with N and Sz
    for n_alpha in 0..=max {
        for n_beta in 0..=max {
            if config.n.is_some_and(|n| n_alpha + n_beta != n) {
                continue;
            }
            if config
                .two_sz
                .is_some_and(|s| n_alpha as i32 - n_beta as i32 != s)
            {
                continue;
            }
            for alpha in masks_with_popcount(norb, n_alpha) {
                for beta in masks_with_popcount(norb, n_beta) {
                    let det = Determinant::new(alpha, beta);
                    if config.admits(&det, basis) {
                        dets.push(det);
                    }
                }
            }
        }
    }
    dets.sort_unstable();
    Ok(ConfigurationBasis {
        config: *config,
        norb,
        dets,
    })
}

/// Number of configurations under `config`, including the unconstrained
/// `4^norb` Fock space and, when `S` is set, the spin-adapted count.
pub fn count_configurations(
    basis: &SpinOrbitalBasis,
    config: &SymmetryConfiguration,
) -> Result<u128> {
    config.validate()?;
    if config.is_unconstrained() {
        return Ok(1u128 << (2 * basis.norb()));
    }
    let cb = enumerate_basis(basis, config)?;
    match config.two_s {
        Some(two_s) if !cb.is_empty() => Ok(count_spin_adapted(&cb, two_s)? as u128),
        _ => Ok(cb.rank() as u128),
    }
}

/// `Q = ⌈log2 Λ⌉`.
pub fn qubit_count(rank: usize) -> Result<u32> {
    qubit_count_u128(rank as u128)
}

pub fn qubit_count_u128(rank: u128) -> Result<u32> {
    match rank {
        0 => Err(Error::Domain("rank must be at least 1")),
        1 => Ok(0),
        r => Ok(128 - (r - 1).leading_zeros()),
    }
}

/// Dimension of the `Ŝ²` eigenspace with eigenvalue `S(S+1)`, `S = two_s/2`.
pub fn count_spin_adapted(basis: &ConfigurationBasis, two_s: u32) -> Result<usize> {
    let s2 = build_s2_matrix(&basis.dets, basis.norb)?;
    let s = two_s as f64 / 2.0;
    let target = s * (s + 1.0);
    Ok(s2
        .eigen()
        .values
        .iter()
        .filter(|v| (*v - target).abs() < SPIN_EIGENVALUE_TOLERANCE)
        .count())
}

/// Places `h` in the top-left corner of a `2^Q × 2^Q` matrix whose
/// remaining diagonal is `padding` and remaining off-diagonals are zero.
pub fn embed(h: &DenseHamiltonian, qubits: u32, padding: f64) -> Result<DenseHamiltonian> {
    if qubits >= usize::BITS / 2 {
        return Err(Error::Size(format!(
            "{qubits} qubits is too many to embed densely"
        )));
    }
    let full = 1usize << qubits;
    let dim = h.dim();
    if dim > full {
        return Err(Error::Size(format!(
            "a {dim}-dimensional block does not fit on {qubits} qubits"
        )));
    }
    if dim == full {
        return Ok(h.clone());
    }
    Ok(DenseHamiltonian::from_upper_fn(full, |i, j| {
        if i < dim && j < dim {
            h.get(i, j)
        } else if i == j {
            padding
        } else {
            0.0
        }
    }))
}

/// Padding that keeps every padded state above the spectrum of `h`:
/// largest diagonal entry plus one hartree.
pub fn penalty_padding(h: &DenseHamiltonian) -> f64 {
    h.diagonal().into_iter().fold(f64::NEG_INFINITY, f64::max) + 1.0
}

/// Lowest eigenpair of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Unit norm; first significant component positive.
    pub vector: Vec<f64>,
}

pub fn exact_ground(h: &DenseHamiltonian) -> GroundState {
    let mut eig = h.eigen();
    GroundState {
        energy: eig.values[0],
        vector: eig.vectors.swap_remove(0),
    }
}

/// `|⟨Φ_ℓ|Ψ0⟩|²` for every basis state `ℓ`.
pub fn ground_overlaps(h: &DenseHamiltonian, basis: &ConfigurationBasis) -> Result<Vec<f64>> {
    if h.dim() != basis.rank() {
        return Err(Error::Size(format!(
            "matrix dimension {} differs from basis rank {}",
            h.dim(),
            basis.rank()
        )));
    }
    Ok(exact_ground(h).vector.iter().map(|c| c * c).collect())
}
