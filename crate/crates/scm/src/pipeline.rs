//! From integrals to a qubit Hamiltonian: constraint handling, block
//! extraction, embedding and Pauli decomposition.

use scm_core::pauli::{decompose, group_qubitwise, MeasurementGroup, DEFAULT_CUTOFF};
use scm_core::pointgroup::{Irrep, PointGroupTable};
use scm_core::scm::{
    count_configurations, embed, enumerate_basis, exact_ground, penalty_padding, qubit_count_u128,
    GroundState,
};
use scm_core::{
    ConfigurationBasis, DenseHamiltonian, IntegralSet, PauliSum, SpinOrbitalBasis,
    SymmetryConfiguration,
};

use crate::error::{CliError, Result};
use crate::fcidump::FcidumpHeader;

/// Converts a half-integer such as `0`, `0.5` or `-1.5` to twice its value.
pub fn parse_half_integer(text: &str) -> Result<i32> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("`{text}` is not a number")))?;
    let twice = v * 2.0;
    if (twice - twice.round()).abs() > 1e-9 || !twice.is_finite() {
        return Err(CliError::Config(format!("`{text}` is not a half-integer")));
    }
    Ok(twice.round() as i32)
}

pub fn format_half_integer(twice: i32) -> String {
    if twice % 2 == 0 {
        format!("{}", twice / 2)
    } else {
        format!("{}", twice as f64 / 2.0)
    }
}

/// Constraint values as given by the user; `None` means "not requested".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConstraintInput {
    pub n: Option<u32>,
    pub sz: Option<String>,
    pub irrep: Option<String>,
    pub s: Option<String>,
}

impl ConstraintInput {
    pub fn is_empty(&self) -> bool {
        self.n.is_none() && self.sz.is_none() && self.irrep.is_none() && self.s.is_none()
    }

    pub fn resolve(&self, group: &'static PointGroupTable) -> Result<SymmetryConfiguration> {
        let c = self.unchecked(group)?;
        c.validate()?;
        Ok(c)
    }

    fn unchecked(&self, group: &'static PointGroupTable) -> Result<SymmetryConfiguration> {
        let mut c = SymmetryConfiguration {
            n: self.n,
            two_sz: self.sz.as_deref().map(parse_half_integer).transpose()?,
            ..SymmetryConfiguration::default()
        };
        c.irrep = self
            .irrep
            .as_deref()
            .map(|l| Irrep::from_label(l, group))
            .transpose()?;
        c.two_s = match self.s.as_deref().map(parse_half_integer).transpose()? {
            Some(v) if v < 0 => return Err(CliError::Config("S must be non-negative".into())),
            v => v.map(|x| x as u32),
        };
        Ok(c)
    }

    /// Fills unset `N`, `Sz`, `Γ` from the FCIDUMP header (`NELEC`, `MS2`, `ISYM`).
    pub fn resolve_with_defaults(
        &self,
        header: &FcidumpHeader,
        group: &'static PointGroupTable,
    ) -> Result<SymmetryConfiguration> {
        let mut c = self.unchecked(group)?;
        c.n.get_or_insert(header.nelec);
        c.two_sz.get_or_insert(header.ms2);
        if c.irrep.is_none() {
            c.irrep = Some(group.from_orbsym(header.isym)?);
        }
        c.validate()?;
        Ok(c)
    }
}

/// Human-readable constraint set, e.g. `N, Sz, Γ`.
pub fn describe(config: &SymmetryConfiguration) -> String {
    let mut parts = Vec::new();
    if let Some(n) = config.n {
        parts.push(format!("N={n}"));
    }
    if let Some(s) = config.two_s {
        parts.push(format!("S={}", format_half_integer(s as i32)));
    }
    if let Some(sz) = config.two_sz {
        parts.push(format!("Sz={}", format_half_integer(sz)));
    }
    if let Some(g) = config.irrep {
        parts.push(format!("Γ={g}"));
    }
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(", ")
    }
}

/// One row of a configuration-count table.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CountRow {
    pub constraints: String,
    pub configurations: u128,
    pub qubits: u32,
}

pub fn count_row(basis: &SpinOrbitalBasis, config: &SymmetryConfiguration) -> Result<CountRow> {
    let configurations = count_configurations(basis, config)?;
    let qubits = if configurations == 0 {
        0
    } else {
        qubit_count_u128(configurations)?
    };
    Ok(CountRow {
        constraints: describe(config),
        configurations,
        qubits,
    })
}

/// The five standard rows: none, N, (N, Sz), (N, Sz, Γ), (N, S, Sz, Γ).
pub fn standard_rows(
    basis: &SpinOrbitalBasis,
    full: &SymmetryConfiguration,
) -> Result<Vec<CountRow>> {
    let (Some(n), Some(two_sz), Some(irrep)) = (full.n, full.two_sz, full.irrep) else {
        return Err(CliError::Config(
            "N, Sz and Γ are needed for the standard rows".into(),
        ));
    };
    let two_s = full.two_s.unwrap_or(two_sz.unsigned_abs());
    let base = SymmetryConfiguration::default();
    [
        base,
        base.with_n(n),
        base.with_n(n).with_two_sz(two_sz),
        base.with_n(n).with_two_sz(two_sz).with_irrep(irrep),
        base.with_n(n)
            .with_two_sz(two_sz)
            .with_irrep(irrep)
            .with_two_s(two_s),
    ]
    .iter()
    .map(|c| count_row(basis, c))
    .collect()
}

/// How the unused `2^Q - Λ` basis states are padded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Padding {
    Value(f64),
    /// Largest block diagonal plus one hartree.
    Penalty,
}

impl Default for Padding {
    fn default() -> Self {
        Padding::Value(0.0)
    }
}

/// One symmetry block, solved exactly and embedded on qubits.
#[derive(Debug, Clone)]
pub struct Block {
    pub basis: ConfigurationBasis,
    pub hamiltonian: DenseHamiltonian,
    pub qubits: u32,
    pub padding: f64,
    pub embedded: DenseHamiltonian,
    pub ground: GroundState,
    /// The padded states reach below the block ground state.
    pub padding_below_ground: bool,
}

impl Block {
    pub fn build(
        ints: &IntegralSet,
        config: &SymmetryConfiguration,
        padding: Padding,
    ) -> Result<Self> {
        let basis = enumerate_basis(&ints.basis(), config)?;
        if basis.is_empty() {
            return Err(CliError::Constraint(format!(
                "no determinant satisfies {}",
                describe(config)
            )));
        }
        let hamiltonian = basis.hamiltonian(ints)?;
        let qubits = basis.qubits()?;
        let padding = match padding {
            Padding::Value(v) => v,
            Padding::Penalty => penalty_padding(&hamiltonian),
        };
        let embedded = embed(&hamiltonian, qubits, padding)?;
        let ground = exact_ground(&hamiltonian);
        let padded = (1usize << qubits) > basis.rank();
        Ok(Self {
            padding_below_ground: padded && ground.energy >= padding,
            basis,
            hamiltonian,
            qubits,
            padding,
            embedded,
            ground,
        })
    }

    pub fn pauli(&self, cutoff: f64) -> Result<PauliSum> {
        Ok(decompose(&self.embedded, cutoff)?)
    }

    pub fn pauli_default(&self) -> Result<PauliSum> {
        self.pauli(DEFAULT_CUTOFF)
    }
}

/// Term and group counts of a qubit Hamiltonian.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GroupingReport {
    pub qubits: u32,
    pub terms: usize,
    pub non_identity_terms: usize,
    pub groups: usize,
    pub odd_y_terms: usize,
    /// Every non-identity term is in exactly one group.
    pub complete: bool,
    /// Every pair of terms within a group commutes qubit-wise.
    pub sound: bool,
    pub bases: Vec<String>,
}

pub fn grouping_report(sum: &PauliSum, groups: &[MeasurementGroup]) -> GroupingReport {
    let terms = sum.terms();
    let mut seen = vec![0usize; terms.len()];
    let mut sound = true;
    for g in groups {
        for (a, &i) in g.members.iter().enumerate() {
            seen[i] += 1;
            for &j in &g.members[a + 1..] {
                sound &= scm_core::pauli::qubitwise_commute(&terms[i].ops, &terms[j].ops);
            }
            sound &= scm_core::pauli::qubitwise_commute(&terms[i].ops, &g.basis);
        }
    }
    let complete = terms
        .iter()
        .zip(&seen)
        .all(|(t, &n)| n == 1 || (t.is_identity() && n <= 1));
    GroupingReport {
        qubits: sum.qubits(),
        terms: terms.len(),
        non_identity_terms: terms.iter().filter(|t| !t.is_identity()).count(),
        groups: groups.len(),
        odd_y_terms: terms.iter().filter(|t| t.y_count() % 2 == 1).count(),
        complete,
        sound,
        bases: groups.iter().map(|g| g.basis_label()).collect(),
    }
}

pub fn group_and_report(sum: &PauliSum) -> (Vec<MeasurementGroup>, GroupingReport) {
    let groups = group_qubitwise(sum);
    let report = grouping_report(sum, &groups);
    (groups, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integers() {
        assert_eq!(parse_half_integer("0").unwrap(), 0);
        assert_eq!(parse_half_integer("-1.5").unwrap(), -3);
        assert_eq!(parse_half_integer(" 0.5 ").unwrap(), 1);
        assert!(parse_half_integer("0.25").is_err());
        assert!(parse_half_integer("x").is_err());
        assert_eq!(format_half_integer(-3), "-1.5");
        assert_eq!(format_half_integer(4), "2");
    }
}
