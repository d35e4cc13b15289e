"""Regenerate the FCIDUMP fixtures under data/ with PySCF.

F2 / STO-3G, D2h symmetry, bond along z, 1s cores frozen (8 active
orbitals, 14 active electrons). H2 / STO-3G at 0.735 Angstrom.
Also writes data/reference_energies.csv with the PySCF full-CI energy
of each fixture for use as an independent oracle.
"""
import os
import sys

import numpy as np
from pyscf import gto, scf, mcscf, fci, tools, ao2mo

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")

# Active-orbital layout by irrep (PySCF ids: Ag=0, B1u=5, B2u=6, B3u=7,
# B2g=2, B3g=3): 2s-sigma_g, 2s-sigma_u, 2p-sigma_g, pi_u(x), pi_u(y),
# pi_g(x), pi_g(y), 2p-sigma_u. Fixed across the grid so that the
# determinant ordering means the same thing at every bond length.
F2_LAYOUT = [0, 5, 0, 7, 6, 2, 3, 5]

F2_GRID = [round(1.0 + 0.1 * i, 2) for i in range(15)]


def write_fcidump(path, h1, eri, norb, nelec, ms2, orbsym, ecore):
    eri = ao2mo.restore(8, eri, norb)
    # FCIDUMP ORBSYM is 1-based (Ag=1, B1g=2, ..., B3u=8)
    tools.fcidump.from_integrals(
        path, h1, eri, norb, nelec, nuc=ecore, ms=ms2,
        orbsym=[int(s) + 1 for s in orbsym], tol=1e-14
    )


def f2(r):
    mol = gto.M(
        atom=f"F 0 0 0; F 0 0 {r}",
        basis="sto-3g",
        symmetry="d2h",
        unit="angstrom",
        verbose=0,
    )
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    mc = mcscf.CASCI(mf, 8, 14)
    h1, ecore = mc.get_h1eff()
    eri = mc.get_h2eff()
    orbsym = list(
        int(x) for x in scf.hf_symm.get_orbsym(mol, mf.mo_coeff)[mc.ncore : mc.ncore + 8]
    )
    order = []
    for irrep in F2_LAYOUT:
        order.append(next(i for i, s in enumerate(orbsym) if s == irrep and i not in order))
    h1 = h1[np.ix_(order, order)]
    eri = ao2mo.restore(1, eri, 8)[np.ix_(order, order, order, order)]
    orbsym = [orbsym[i] for i in order]
    e_fci, _ = fci.direct_spin1.kernel(h1, eri, 8, (7, 7), ecore=ecore, conv_tol=1e-14)
    return h1, eri, ecore, orbsym, e_fci


def h2():
    mol = gto.M(atom="H 0 0 0; H 0 0 0.735", basis="sto-3g", symmetry="d2h", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.full(mol, c)
    orbsym = [int(x) for x in scf.hf_symm.get_orbsym(mol, c)]
    ecore = mol.energy_nuc()
    e_fci, _ = fci.direct_spin1.kernel(h1, eri, 2, (1, 1), ecore=ecore, conv_tol=1e-14)
    return h1, eri, ecore, orbsym, e_fci


def main():
    os.makedirs(DATA, exist_ok=True)
    rows = []
    h1, eri, ecore, orbsym, e = h2()
    write_fcidump(os.path.join(DATA, "h2_sto3g.fcidump"), h1, eri, 2, 2, 0, orbsym, ecore)
    rows.append(("h2_sto3g.fcidump", 0.735, e))
    for r in F2_GRID:
        h1, eri, ecore, orbsym, e = f2(r)
        name = f"f2_sto3g_frozencore_{r:.2f}.fcidump"
        write_fcidump(os.path.join(DATA, name), h1, eri, 8, 14, 0, orbsym, ecore)
        rows.append((name, r, e))
        print(name, orbsym, e, file=sys.stderr)
    with open(os.path.join(DATA, "reference_energies.csv"), "w") as f:
        f.write("file,bond_length_angstrom,fci_energy_hartree\n")
        for name, r, e in rows:
            f.write(f"{name},{r:.3f},{e:.12f}\n")


if __name__ == "__main__":
    main()
