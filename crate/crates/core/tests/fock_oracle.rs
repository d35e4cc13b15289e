//! Slater–Condon matrices against a brute-force second-quantized build on
//! the full Fock space.

mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scm_core::fock::{build_matrix, build_s2_matrix};
use scm_core::pointgroup::{Irrep, C1, D2H};
use scm_core::scm::enumerate_basis;
use scm_core::{Determinant, IntegralSet, SymmetryConfiguration};
use support::fock_space::{hamiltonian, s_squared};

/// Random real integrals with 8-fold permutational symmetry; integrals whose
/// irrep product is not totally symmetric are zero.
fn random_integrals(irreps: Vec<Irrep>, seed: u64) -> IntegralSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norb = irreps.len();
    let mut ints = IntegralSet::zeros(irreps.clone(), 0, 0).unwrap();
    ints.constant = rng.gen_range(-2.0..2.0);
    let sym = |idx: &[usize]| idx.iter().fold(0u8, |acc, &i| acc ^ irreps[i].code()) == 0;
    for p in 0..norb {
        for q in 0..=p {
            if sym(&[p, q]) {
                ints.set_one(p, q, rng.gen_range(-1.0..1.0));
            }
        }
    }
    for p in 0..norb {
        for q in 0..norb {
            for r in 0..norb {
                for s in 0..norb {
                    if sym(&[p, q, r, s]) {
                        ints.set_two(p, q, r, s, rng.gen_range(-0.5..0.5));
                    }
                }
            }
        }
    }
    assert!(ints.max_symmetry_violation() < 1e-15);
    ints
}

fn fock_index(det: &Determinant, norb: usize) -> usize {
    det.spin_orbital_bits(norb) as usize
}

fn sectors(norb: usize) -> impl Iterator<Item = (u32, i32)> {
    let m = norb as i32;
    (0..=m).flat_map(move |na| (0..=m).map(move |nb| ((na + nb) as u32, na - nb)))
}

#[test]
fn slater_condon_matches_fock_space_c1() {
    for (norb, seed) in [(1, 1), (2, 2), (2, 3), (3, 4), (3, 5)] {
        let ints = random_integrals(vec![C1.identity(); norb], seed);
        let oracle = hamiltonian(&ints);
        for (n, two_sz) in sectors(norb) {
            let cfg = SymmetryConfiguration::default()
                .with_n(n)
                .with_two_sz(two_sz);
            let basis = enumerate_basis(&ints.basis(), &cfg).unwrap();
            let h = build_matrix(basis.dets(), &ints).unwrap();
            for (i, bra) in basis.dets().iter().enumerate() {
                for (j, ket) in basis.dets().iter().enumerate() {
                    let want = oracle.get(fock_index(bra, norb), fock_index(ket, norb));
                    let got = h.get(i, j);
                    assert!(
                        (want - got).abs() < 1e-10,
                        "norb {norb} N {n} 2Sz {two_sz} <{i}|H|{j}>: {got} vs {want}"
                    );
                }
            }
        }
    }
}

#[test]
fn symmetry_blocks_match_fock_space_d2h() {
    let labels = ["Ag", "B1u", "B3u"];
    let irreps: Vec<Irrep> = labels
        .iter()
        .map(|l| Irrep::from_label(l, &D2H).unwrap())
        .collect();
    let ints = random_integrals(irreps, 11);
    let oracle = hamiltonian(&ints);
    let basis = ints.basis();
    // the oracle never couples determinants of different (N, Sz, Γ)
    let dim = oracle.dim;
    for s in 0..dim {
        for t in 0..dim {
            let v = oracle.get(t, s);
            if v.abs() > 1e-14 {
                let a = Determinant::from_spin_orbital_bits(s as u128, 3).quantum_numbers(&basis);
                let b = Determinant::from_spin_orbital_bits(t as u128, 3).quantum_numbers(&basis);
                assert_eq!(a, b, "coupling {v} between {s:06b} and {t:06b}");
            }
        }
    }
    for irrep in D2H.irreps() {
        for (n, two_sz) in sectors(3) {
            let cfg = SymmetryConfiguration::default()
                .with_n(n)
                .with_two_sz(two_sz)
                .with_irrep(irrep);
            let block = enumerate_basis(&basis, &cfg).unwrap();
            if block.is_empty() {
                continue;
            }
            let h = build_matrix(block.dets(), &ints).unwrap();
            for (i, bra) in block.dets().iter().enumerate() {
                for (j, ket) in block.dets().iter().enumerate() {
                    let want = oracle.get(fock_index(bra, 3), fock_index(ket, 3));
                    assert!((want - h.get(i, j)).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn spin_squared_matches_fock_space() {
    for norb in 1..=3 {
        let oracle = s_squared(norb);
        let basis = IntegralSet::zeros(vec![C1.identity(); norb], 0, 0)
            .unwrap()
            .basis();
        for (n, two_sz) in sectors(norb) {
            let cfg = SymmetryConfiguration::default()
                .with_n(n)
                .with_two_sz(two_sz);
            let block = enumerate_basis(&basis, &cfg).unwrap();
            let s2 = build_s2_matrix(block.dets(), norb).unwrap();
            for (i, bra) in block.dets().iter().enumerate() {
                for (j, ket) in block.dets().iter().enumerate() {
                    let want = oracle.get(fock_index(bra, norb), fock_index(ket, norb));
                    assert!((want - s2.get(i, j)).abs() < 1e-12, "norb {norb} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn hamiltonian_commutes_with_spin_squared() {
    let ints = random_integrals(vec![C1.identity(); 3], 21);
    let cfg = SymmetryConfiguration::default().with_n(3).with_two_sz(1);
    let block = enumerate_basis(&ints.basis(), &cfg).unwrap();
    let h = build_matrix(block.dets(), &ints).unwrap();
    let s2 = build_s2_matrix(block.dets(), 3).unwrap();
    assert!(h.commutator_max_norm(&s2) < 1e-10);
}
