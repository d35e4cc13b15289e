//! Slater determinants over a spin-orbital basis and the matrix elements
//! of the electronic Hamiltonian and of total spin between them.
//!
//! Spin-orbital order is all alpha orbitals (ascending) followed by all
//! beta orbitals. The fermionic sign of an operator acting on spin-orbital
//! `k` is `(-1)^(number of occupied spin-orbitals below k)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::DenseHamiltonian;
use crate::pointgroup::{Irrep, PointGroupTable};

/// Largest number of spatial orbitals a [`Determinant`] can hold.
pub const MAX_ORBITALS: usize = 64;

/// Spatial orbitals with their symmetry labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOrbitalBasis {
    orbital_irreps: Vec<Irrep>,
    /// Frozen-core plus nuclear repulsion energy, hartree.
    pub core_energy: f64,
}

impl SpinOrbitalBasis {
    pub fn new(orbital_irreps: Vec<Irrep>, core_energy: f64) -> Result<Self> {
        if orbital_irreps.len() > MAX_ORBITALS {
            return Err(Error::Size(format!(
                "{} spatial orbitals exceed the supported maximum of {MAX_ORBITALS}",
                orbital_irreps.len()
            )));
        }
        if let Some(first) = orbital_irreps.first() {
            if orbital_irreps
                .iter()
                .any(|g| !core::ptr::eq(g.group(), first.group()))
            {
                return Err(Error::MismatchedGroups(first.group().name, "mixed"));
            }
        }
        Ok(Self {
            orbital_irreps,
            core_energy,
        })
    }

    #[inline]
    pub fn norb(&self) -> usize {
        self.orbital_irreps.len()
    }

    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.norb()
    }

    pub fn orbital_irreps(&self) -> &[Irrep] {
        &self.orbital_irreps
    }

    pub fn point_group(&self) -> &'static PointGroupTable {
        self.orbital_irreps
            .first()
            .map(|g| g.group())
            .unwrap_or(&crate::pointgroup::C1)
    }

    /// Product of the irreps of the orbitals set in `mask`.
    pub fn mask_irrep(&self, mask: u64) -> Irrep {
        let mut code = 0u8;
        let mut m = mask;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            code ^= self.orbital_irreps[p].code();
            m &= m - 1;
        }
        // codes of a single table are closed under xor
        self.point_group()
            .from_code(code)
            .expect("closed under xor")
    }
}

/// One Slater determinant as alpha and beta occupation bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Determinant {
    pub alpha: u64,
    pub beta: u64,
}

/// Quantum numbers of a determinant. `two_sz` is `2·Sz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumNumbers {
    pub n: u32,
    pub two_sz: i32,
    pub irrep: Irrep,
}

impl QuantumNumbers {
    pub fn sz(&self) -> f64 {
        self.two_sz as f64 / 2.0
    }
}

impl Determinant {
    pub const fn new(alpha: u64, beta: u64) -> Self {
        Self { alpha, beta }
    }

    pub fn n_alpha(&self) -> u32 {
        self.alpha.count_ones()
    }

    pub fn n_beta(&self) -> u32 {
        self.beta.count_ones()
    }

    pub fn n_electrons(&self) -> u32 {
        self.n_alpha() + self.n_beta()
    }

    /// Occupation over spin-orbitals: alpha in bits `0..norb`, beta in
    /// bits `norb..2·norb`.
    pub fn spin_orbital_bits(&self, norb: usize) -> u128 {
        self.alpha as u128 | ((self.beta as u128) << norb)
    }

    pub fn from_spin_orbital_bits(bits: u128, norb: usize) -> Self {
        let low = if norb == 64 {
            u64::MAX
        } else {
            (1u64 << norb) - 1
        };
        Self {
            alpha: (bits as u64) & low,
            beta: ((bits >> norb) as u64) & low,
        }
    }

    pub fn fits(&self, norb: usize) -> bool {
        norb >= 64 || (self.alpha >> norb == 0 && self.beta >> norb == 0)
    }

    pub fn quantum_numbers(&self, basis: &SpinOrbitalBasis) -> QuantumNumbers {
        QuantumNumbers {
            n: self.n_electrons(),
            two_sz: self.n_alpha() as i32 - self.n_beta() as i32,
            irrep: basis.mask_irrep(self.alpha ^ self.beta),
        }
    }
}

/// `(N, Sz, Γ)` of `det`: total popcount, half the alpha/beta imbalance, and
/// the product of the irreps of all occupied spin-orbitals.
pub fn determinant_quantum_numbers(det: &Determinant, basis: &SpinOrbitalBasis) -> QuantumNumbers {
    det.quantum_numbers(basis)
}

/// One- and two-electron integrals of an active space, chemists' notation.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    norb: usize,
    pub nelec: u32,
    pub ms2: i32,
    orbital_irreps: Vec<Irrep>,
    /// Scalar constant (nuclear repulsion plus frozen core), hartree.
    pub constant: f64,
    one: Vec<f64>,
    two: Vec<f64>,
}

impl IntegralSet {
    /// All-zero integrals over the given orbitals.
    pub fn zeros(orbital_irreps: Vec<Irrep>, nelec: u32, ms2: i32) -> Result<Self> {
        let norb = orbital_irreps.len();
        SpinOrbitalBasis::new(orbital_irreps.clone(), 0.0)?;
        Ok(Self {
            norb,
            nelec,
            ms2,
            orbital_irreps,
            constant: 0.0,
            one: vec![0.0; norb * norb],
            two: vec![0.0; norb * norb * norb * norb],
        })
    }

    #[inline]
    pub fn norb(&self) -> usize {
        self.norb
    }

    pub fn orbital_irreps(&self) -> &[Irrep] {
        &self.orbital_irreps
    }

    pub fn basis(&self) -> SpinOrbitalBasis {
        SpinOrbitalBasis {
            orbital_irreps: self.orbital_irreps.clone(),
            core_energy: self.constant,
        }
    }

    #[inline]
    pub fn one(&self, p: usize, q: usize) -> f64 {
        self.one[p * self.norb + q]
    }

    #[inline]
    fn idx4(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.norb + q) * self.norb + r) * self.norb + s
    }

    /// `(pq|rs)`, 0-based.
    #[inline]
    pub fn two(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.two[self.idx4(p, q, r, s)]
    }

    /// Sets `h(p,q)` and `h(q,p)`.
    pub fn set_one(&mut self, p: usize, q: usize, value: f64) {
        let n = self.norb;
        self.one[p * n + q] = value;
        self.one[q * n + p] = value;
    }

    /// Sets `(pq|rs)` and its seven permutational partners.
    pub fn set_two(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            let i = self.idx4(a, b, c, d);
            self.two[i] = value;
        }
    }

    /// Largest deviation from `h(p,q) = h(q,p)` and the 8-fold symmetry of `g`.
    pub fn max_symmetry_violation(&self) -> f64 {
        let n = self.norb;
        let mut worst = 0.0_f64;
        for p in 0..n {
            for q in 0..n {
                worst = worst.max((self.one(p, q) - self.one(q, p)).abs());
                for r in 0..n {
                    for s in 0..n {
                        let v = self.two(p, q, r, s);
                        for w in [
                            self.two(q, p, r, s),
                            self.two(p, q, s, r),
                            self.two(r, s, p, q),
                        ] {
                            worst = worst.max((v - w).abs());
                        }
                    }
                }
            }
        }
        worst
    }

    /// Antisymmetrized spin-orbital integral `<pq||rs>` with spin-orbital
    /// indices in the alpha-then-beta layout.
    fn antisym(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.norb;
        let (ps, po) = (p / n, p % n);
        let (qs, qo) = (q / n, q % n);
        let (rs_, ro) = (r / n, r % n);
        let (ss, so) = (s / n, s % n);
        let mut v = 0.0;
        if ps == rs_ && qs == ss {
            v += self.two(po, ro, qo, so);
        }
        if ps == ss && qs == rs_ {
            v -= self.two(po, so, qo, ro);
        }
        v
    }

    fn one_so(&self, p: usize, q: usize) -> f64 {
        let n = self.norb;
        if p / n == q / n {
            self.one(p % n, q % n)
        } else {
            0.0
        }
    }
}

/// Applies `a_k`; returns the sign, or `None` when `k` is empty.
#[inline]
fn annihilate(bits: &mut u128, k: usize) -> Option<f64> {
    let bit = 1u128 << k;
    if *bits & bit == 0 {
        return None;
    }
    let below = (*bits & (bit - 1)).count_ones();
    *bits ^= bit;
    Some(if below.is_multiple_of(2) { 1.0 } else { -1.0 })
}

/// Applies `a†_k`; returns the sign, or `None` when `k` is occupied.
#[inline]
fn create(bits: &mut u128, k: usize) -> Option<f64> {
    let bit = 1u128 << k;
    if *bits & bit != 0 {
        return None;
    }
    let below = (*bits & (bit - 1)).count_ones();
    *bits |= bit;
    Some(if below.is_multiple_of(2) { 1.0 } else { -1.0 })
}

fn set_bits(mut bits: u128) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(k)
        }
    })
}

/// `⟨bra|Ĥ|ket⟩` by the Slater–Condon rules, including the scalar constant
/// on the diagonal.
pub fn slater_condon_element(bra: &Determinant, ket: &Determinant, ints: &IntegralSet) -> f64 {
    let n = ints.norb;
    let b = bra.spin_orbital_bits(n);
    let k = ket.spin_orbital_bits(n);
    let diff = b ^ k;
    match diff.count_ones() {
        0 => {
            let occ: Vec<usize> = set_bits(k).collect();
            let mut e = ints.constant;
            for (x, &i) in occ.iter().enumerate() {
                e += ints.one_so(i, i);
                for &j in &occ[x + 1..] {
                    e += ints.antisym(i, j, i, j);
                }
            }
            e
        }
        2 => {
            let m = (k & diff).trailing_zeros() as usize;
            let p = (b & diff).trailing_zeros() as usize;
            let mut bits = k;
            let sign = annihilate(&mut bits, m).unwrap() * create(&mut bits, p).unwrap();
            let mut v = ints.one_so(p, m);
            for j in set_bits(k) {
                v += ints.antisym(p, j, m, j);
            }
            sign * v
        }
        4 => {
            let mut holes = set_bits(k & diff);
            let (m, nn) = (holes.next().unwrap(), holes.next().unwrap());
            let mut parts = set_bits(b & diff);
            let (p, q) = (parts.next().unwrap(), parts.next().unwrap());
            // bra = sign · a†_p a†_q a_n a_m |ket⟩
            let mut bits = k;
            let sign = annihilate(&mut bits, m).unwrap()
                * annihilate(&mut bits, nn).unwrap()
                * create(&mut bits, q).unwrap()
                * create(&mut bits, p).unwrap();
            sign * ints.antisym(p, q, m, nn)
        }
        _ => 0.0,
    }
}

fn check_shared_numbers(
    dets: &[Determinant],
    basis: &SpinOrbitalBasis,
    with_irrep: bool,
) -> Result<()> {
    let first = dets.first().ok_or(Error::EmptyBasis)?;
    if let Some(bad) = dets.iter().find(|d| !d.fits(basis.norb())) {
        return Err(Error::Size(format!(
            "determinant {bad:?} does not fit in {} orbitals",
            basis.norb()
        )));
    }
    let q0 = first.quantum_numbers(basis);
    for d in dets {
        let q = d.quantum_numbers(basis);
        if q.n != q0.n || q.two_sz != q0.two_sz || (with_irrep && q.irrep != q0.irrep) {
            return Err(Error::Configuration(format!(
                "determinants {first:?} and {d:?} carry different quantum numbers"
            )));
        }
    }
    Ok(())
}

/// Hamiltonian matrix over `dets`. All determinants must share `(N, Sz, Γ)`.
pub fn build_matrix(dets: &[Determinant], ints: &IntegralSet) -> Result<DenseHamiltonian> {
    check_shared_numbers(dets, &ints.basis(), true)?;
    Ok(build_matrix_unchecked(dets, ints))
}

/// Hamiltonian matrix over an arbitrary determinant list.
pub fn build_matrix_unchecked(dets: &[Determinant], ints: &IntegralSet) -> DenseHamiltonian {
    DenseHamiltonian::from_upper_fn(dets.len(), |i, j| {
        slater_condon_element(&dets[i], &dets[j], ints)
    })
}

/// `Ŝ+ = Σ_p a†_{pα} a_{pβ}` applied to a determinant.
fn apply_s_plus(bits: u128, norb: usize, out: &mut Vec<(u128, f64)>) {
    for p in 0..norb {
        let mut b = bits;
        if let Some(s1) = annihilate(&mut b, norb + p) {
            if let Some(s2) = create(&mut b, p) {
                out.push((b, s1 * s2));
            }
        }
    }
}

/// `Ŝ- = Σ_p a†_{pβ} a_{pα}` applied to a determinant.
fn apply_s_minus(bits: u128, norb: usize, out: &mut Vec<(u128, f64)>) {
    for p in 0..norb {
        let mut b = bits;
        if let Some(s1) = annihilate(&mut b, p) {
            if let Some(s2) = create(&mut b, norb + p) {
                out.push((b, s1 * s2));
            }
        }
    }
}

/// Matrix of `Ŝ² = Ŝ-Ŝ+ + Ŝz(Ŝz + 1)` over `dets` (shared `N` and `Sz`).
pub fn build_s2_matrix(dets: &[Determinant], norb: usize) -> Result<DenseHamiltonian> {
    if dets.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let first = dets[0];
    if dets
        .iter()
        .any(|d| d.n_alpha() != first.n_alpha() || d.n_beta() != first.n_beta() || !d.fits(norb))
    {
        return Err(Error::Configuration(
            "Ŝ² basis must share N and Sz and fit the orbital count".into(),
        ));
    }
    let index: BTreeMap<u128, usize> = dets
        .iter()
        .enumerate()
        .map(|(i, d)| (d.spin_orbital_bits(norb), i))
        .collect();
    let dim = dets.len();
    let mut data = vec![0.0; dim * dim];
    let sz = (first.n_alpha() as f64 - first.n_beta() as f64) / 2.0;
    let mut raised = Vec::new();
    let mut lowered = Vec::new();
    for (col, det) in dets.iter().enumerate() {
        data[col * dim + col] += sz * (sz + 1.0);
        raised.clear();
        apply_s_plus(det.spin_orbital_bits(norb), norb, &mut raised);
        for &(bits, c) in &raised {
            lowered.clear();
            apply_s_minus(bits, norb, &mut lowered);
            for &(out, c2) in &lowered {
                if let Some(&row) = index.get(&out) {
                    data[row * dim + col] += c * c2;
                }
            }
        }
    }
    DenseHamiltonian::new(dim, data)
}
