//! Symmetry configuration mapping.
//!
//! Builds symmetry-adapted determinant bases for a molecular active space,
//! extracts the Hamiltonian block of one symmetry configuration
//! `Σ = (N, Sz, Γ)`, embeds it on `⌈log2 Λ⌉` qubits, expands it in Pauli
//! strings and solves it either exactly or with a simulated variational
//! quantum eigensolver (hardware-efficient ansatz, SPSA, shot sampling and
//! readout-error mitigation).
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the command
//! line driver and run orchestration live in the companion `scm` crate.
//!
//! # Layout
//!
//! - [`pointgroup`]: abelian point-group irreps (D2h and subgroups).
//! - [`fock`]: determinants, integrals and Slater–Condon matrix elements.
//! - [`scm`]: basis enumeration, qubit counts, block extraction, exact solver.
//! - [`pauli`]: Pauli decomposition and qubit-wise measurement grouping.
//! - [`vqe`]: statevector ansatz simulation, energy estimation and SPSA.
//! - [`mitigation`]: readout noise model and calibration-matrix correction.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod error;
pub mod fock;
pub mod linalg;
pub mod mitigation;
pub mod pauli;
pub mod pointgroup;
pub mod scm;
pub mod vqe;

pub use error::{Error, Result};
pub use fock::{Determinant, IntegralSet, SpinOrbitalBasis};
pub use linalg::DenseHamiltonian;
pub use mitigation::{ConfusionMatrix, ReadoutNoiseModel};
pub use pauli::{MeasurementGroup, PauliOp, PauliString, PauliSum};
pub use pointgroup::{Irrep, PointGroupTable};
pub use scm::{ConfigurationBasis, SymmetryConfiguration};
pub use vqe::{AnsatzSpec, EnergyTrace, RotationScheme, SpsaParams, Statevector};

/// Hartree to kcal/mol.
pub const HARTREE_TO_KCAL_PER_MOL: f64 = 627.509_474_063_1;

/// Chemical accuracy, 1 kcal/mol, in hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.0 / HARTREE_TO_KCAL_PER_MOL;
