//! Pauli-string expansion of Hermitian matrices and qubit-wise commuting
//! measurement groups.
//!
//! Qubit 1 is the leftmost factor of a tensor product and the most
//! significant bit of a computational-basis index.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::DenseHamiltonian;

/// Default magnitude below which coefficients are dropped, hartree.
pub const DEFAULT_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub fn as_char(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' | '0' => Some(PauliOp::I),
            'X' => Some(PauliOp::X),
            'Y' => Some(PauliOp::Y),
            'Z' => Some(PauliOp::Z),
            _ => None,
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliOp::I,
            (true, false) => PauliOp::X,
            (true, true) => PauliOp::Y,
            (false, true) => PauliOp::Z,
        }
    }
}

/// Symplectic form of a Pauli string on `n` qubits: qubit `q` (0-based from
/// the left) sits at bit `n - 1 - q`. `P|j⟩ = i^{#Y} (-1)^{|j ∧ z|} |j ⊕ x⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliMasks {
    pub x: u64,
    pub z: u64,
}

impl PauliMasks {
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }
}

/// Weighted tensor product of single-qubit Pauli operators.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub ops: Vec<PauliOp>,
    pub coeff: f64,
}

impl PauliString {
    pub fn new(ops: Vec<PauliOp>, coeff: f64) -> Self {
        Self { ops, coeff }
    }

    /// Parses a label such as `ZZIX`.
    pub fn parse_label(label: &str, coeff: f64) -> Result<Self> {
        let ops = parse_ops(label)?;
        Ok(Self { ops, coeff })
    }

    pub fn qubits(&self) -> usize {
        self.ops.len()
    }

    pub fn label(&self) -> String {
        self.ops.iter().map(|o| o.as_char()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&o| o == PauliOp::I)
    }

    pub fn y_count(&self) -> usize {
        self.ops.iter().filter(|&&o| o == PauliOp::Y).count()
    }

    pub fn masks(&self) -> PauliMasks {
        let n = self.ops.len();
        let mut m = PauliMasks { x: 0, z: 0 };
        for (q, op) in self.ops.iter().enumerate() {
            let bit = 1u64 << (n - 1 - q);
            if matches!(op, PauliOp::X | PauliOp::Y) {
                m.x |= bit;
            }
            if matches!(op, PauliOp::Z | PauliOp::Y) {
                m.z |= bit;
            }
        }
        m
    }
}

fn parse_ops(label: &str) -> Result<Vec<PauliOp>> {
    label
        .trim()
        .chars()
        .map(|c| {
            PauliOp::from_char(c).ok_or_else(|| {
                Error::Size(format!("invalid Pauli label character `{c}` in `{label}`"))
            })
        })
        .collect()
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.15e} {}", self.coeff, self.label())
    }
}

/// `Σ c_P · P` over `Q`-qubit Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    qubits: u32,
    terms: Vec<PauliString>,
}

impl PauliSum {
    /// Builds a sum, merging duplicate strings.
    pub fn new(qubits: u32, terms: Vec<PauliString>) -> Result<Self> {
        let mut merged: Vec<PauliString> = Vec::with_capacity(terms.len());
        for t in terms {
            if t.qubits() != qubits as usize {
                return Err(Error::Size(format!(
                    "term `{}` acts on {} qubits, expected {qubits}",
                    t.label(),
                    t.qubits()
                )));
            }
            match merged.iter_mut().find(|m| m.ops == t.ops) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        Ok(Self {
            qubits,
            terms: merged,
        })
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the all-identity string (0 if absent).
    pub fn identity_coeff(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.is_identity())
            .map(|t| t.coeff)
            .sum()
    }

    /// Whether every term has an even number of `Y` factors (real matrix).
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.y_count() % 2 == 0)
    }

    /// Dense matrix `Σ c_P · P`.
    ///
    /// Only real sums (even `Y` count in every term) have a real matrix;
    /// other sums are rejected.
    pub fn reconstruct(&self) -> Result<DenseHamiltonian> {
        if !self.is_real() {
            return Err(Error::Domain(
                "Pauli sum with odd-Y terms has no real matrix",
            ));
        }
        let dim = 1usize << self.qubits;
        let mut data = vec![0.0; dim * dim];
        for t in &self.terms {
            let m = t.masks();
            let phase = if m.y_count() % 4 == 0 {
                t.coeff
            } else {
                -t.coeff
            };
            for j in 0..dim {
                let sign = if (j as u64 & m.z).count_ones().is_multiple_of(2) {
                    phase
                } else {
                    -phase
                };
                data[(j ^ m.x as usize) * dim + j] += sign;
            }
        }
        DenseHamiltonian::new(dim, data)
    }
}

/// `Σ c_P · P` for `h` of dimension `2^Q`, with `c_P = Tr(P·h)/2^Q`.
/// Coefficients with `|c| ≤ cutoff` are dropped; terms are ordered by label
/// with `I < X < Y < Z`.
pub fn decompose(h: &DenseHamiltonian, cutoff: f64) -> Result<PauliSum> {
    let dim = h.dim();
    if !dim.is_power_of_two() {
        return Err(Error::Size(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    let qubits = dim.trailing_zeros();
    if qubits > 31 {
        return Err(Error::Size("too many qubits".into()));
    }
    let norm = 1.0 / dim as f64;
    let mut coeffs: Vec<(u64, u64, f64)> = Vec::new();
    let mut column = vec![0.0; dim];
    for x in 0..dim {
        // column[k] = h[k][k ^ x]; its Walsh–Hadamard transform over k gives
        // Σ_k (-1)^{|k ∧ z|} h[k][k ^ x] for every z at once.
        for (k, c) in column.iter_mut().enumerate() {
            *c = h.get(k, k ^ x);
        }
        walsh_hadamard(&mut column);
        for (z, &w) in column.iter().enumerate() {
            let ny = (x & z).count_ones();
            // Tr(P h) = i^{ny} · w; real h makes odd-ny traces vanish.
            if ny % 2 == 1 {
                continue;
            }
            let c = if ny % 4 == 0 { w } else { -w } * norm;
            if c.abs() > cutoff {
                coeffs.push((x as u64, z as u64, c));
            }
        }
    }
    let n = qubits as usize;
    let mut terms: Vec<PauliString> = coeffs
        .into_iter()
        .map(|(x, z, c)| {
            let ops = (0..n)
                .map(|q| {
                    let bit = 1u64 << (n - 1 - q);
                    PauliOp::from_bits(x & bit != 0, z & bit != 0)
                })
                .collect();
            PauliString::new(ops, c)
        })
        .collect();
    terms.sort_by(|a, b| a.ops.cmp(&b.ops));
    Ok(PauliSum { qubits, terms })
}

/// In-place unnormalized Walsh–Hadamard transform; length must be a power of two.
fn walsh_hadamard(v: &mut [f64]) {
    let n = v.len();
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (v[i], v[i + half]);
                v[i] = a + b;
                v[i + half] = a - b;
            }
        }
        half *= 2;
    }
}

/// Terms measurable together in one tensor-product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGroup {
    /// Indices into [`PauliSum::terms`].
    pub members: Vec<usize>,
    /// Measurement basis, one of `X`, `Y`, `Z` per qubit.
    pub basis: Vec<PauliOp>,
}

impl MeasurementGroup {
    pub fn basis_label(&self) -> String {
        self.basis.iter().map(|o| o.as_char()).collect()
    }
}

/// Whether `a` and `b` agree on every qubit where neither is the identity.
pub fn qubitwise_commute(a: &[PauliOp], b: &[PauliOp]) -> bool {
    a.iter()
        .zip(b)
        .all(|(&p, &q)| p == PauliOp::I || q == PauliOp::I || p == q)
}

/// Greedy first-fit grouping of the non-identity terms, visited in order of
/// descending `|c|`. The identity term (if any) joins the first group and is
/// evaluated analytically. Unconstrained basis positions are filled with `Z`.
pub fn group_qubitwise(sum: &PauliSum) -> Vec<MeasurementGroup> {
    let mut order: Vec<usize> = (0..sum.terms.len())
        .filter(|&i| !sum.terms[i].is_identity())
        .collect();
    order.sort_by(|&a, &b| {
        sum.terms[b]
            .coeff
            .abs()
            .total_cmp(&sum.terms[a].coeff.abs())
            .then(a.cmp(&b))
    });
    let n = sum.qubits as usize;
    let mut groups: Vec<(Vec<usize>, Vec<PauliOp>)> = Vec::new();
    for idx in order {
        let ops = &sum.terms[idx].ops;
        match groups
            .iter_mut()
            .find(|(_, basis)| qubitwise_commute(basis, ops))
        {
            Some((members, basis)) => {
                members.push(idx);
                for (b, &o) in basis.iter_mut().zip(ops) {
                    if o != PauliOp::I {
                        *b = o;
                    }
                }
            }
            None => groups.push((vec![idx], ops.clone())),
        }
    }
    if let Some(id) = sum.terms.iter().position(|t| t.is_identity()) {
        match groups.first_mut() {
            Some((members, _)) => members.insert(0, id),
            None => groups.push((vec![id], vec![PauliOp::I; n])),
        }
    }
    groups
        .into_iter()
        .map(|(members, basis)| MeasurementGroup {
            members,
            basis: basis
                .into_iter()
                .map(|o| if o == PauliOp::I { PauliOp::Z } else { o })
                .collect(),
        })
        .collect()
}

impl FromStr for PauliString {
    type Err = Error;

    /// `<coeff> <label>`, e.g. `-0.25 ZZIX`.
    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split_whitespace();
        let (Some(c), Some(label), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Size(format!(
                "expected `<coeff> <label>`, got `{s}`"
            )));
        };
        let coeff: f64 = c
            .parse()
            .map_err(|_| Error::Size(format!("invalid coefficient `{c}`")))?;
        PauliString::parse_label(label, coeff)
    }
}
