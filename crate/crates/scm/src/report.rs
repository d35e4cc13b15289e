//! JSON traces and CSV tables written by the CLI.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use scm_core::{ConfusionMatrix, HARTREE_TO_KCAL_PER_MOL};

use crate::error::{CliError, Result};
use crate::run::GeometryResult;

#[derive(Debug, Serialize)]
struct TraceRecord<'a> {
    iteration: usize,
    theta: &'a [f64],
    energy_plus: f64,
    energy_minus: f64,
    energy_current: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TraceDocument<'a> {
    bond_length_angstrom: f64,
    fixture: String,
    configurations: usize,
    qubits: u32,
    pauli_terms: usize,
    measurement_groups: usize,
    padding_hartree: f64,
    exact_energy_hartree: f64,
    mean_energy_hartree: f64,
    std_dev_hartree: f64,
    error_kcal_per_mol: f64,
    best_restart: usize,
    restart_means_hartree: &'a [f64],
    mitigation_fallbacks: usize,
    final_theta: &'a [f64],
    seconds: f64,
    records: Vec<TraceRecord<'a>>,
}

/// The full optimization history of one geometry as pretty JSON.
pub fn trace_json(r: &GeometryResult) -> String {
    let doc = TraceDocument {
        bond_length_angstrom: r.bond_length,
        fixture: r.fixture.display().to_string(),
        configurations: r.rank,
        qubits: r.qubits,
        pauli_terms: r.terms,
        measurement_groups: r.groups,
        padding_hartree: r.padding,
        exact_energy_hartree: r.exact_energy,
        mean_energy_hartree: r.mean(),
        std_dev_hartree: r.std_dev(),
        error_kcal_per_mol: r.error_kcal(),
        best_restart: r.best_restart,
        restart_means_hartree: &r.restart_means,
        mitigation_fallbacks: r.trace.mitigation_fallbacks,
        final_theta: &r.trace.final_theta,
        seconds: r.seconds,
        records: r
            .trace
            .records
            .iter()
            .map(|rec| TraceRecord {
                iteration: rec.iteration,
                theta: &rec.theta,
                energy_plus: rec.energy_plus,
                energy_minus: rec.energy_minus,
                energy_current: rec.energy_current,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("trace serializes")
}

pub fn trace_file_name(bond_length: f64) -> String {
    format!("trace_{bond_length:.2}.json")
}

pub const CURVE_HEADER: &str =
    "bond_length_angstrom,exact_energy_hartree,vqe_mean_hartree,vqe_std_hartree,\
error_kcal_per_mol,exact_relative_kcal_per_mol,vqe_relative_kcal_per_mol,vqe_std_kcal_per_mol";

/// Energy curve relative to `reference` (normally the exact energy at the
/// equilibrium grid point).
pub fn curve_csv(results: &[GeometryResult], reference: f64) -> String {
    let k = HARTREE_TO_KCAL_PER_MOL;
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for r in results {
        writeln!(
            out,
            "{:.2},{:.12},{:.12},{:.12},{:.6},{:.6},{:.6},{:.6}",
            r.bond_length,
            r.exact_energy,
            r.mean(),
            r.std_dev(),
            r.error_kcal(),
            (r.exact_energy - reference) * k,
            (r.mean() - reference) * k,
            r.std_dev() * k,
        )
        .unwrap();
    }
    out
}

/// Rows are measured outcomes, columns prepared states.
pub fn confusion_csv(cal: &ConfusionMatrix, qubits: usize) -> String {
    let label = |i: usize| format!("{i:0qubits$b}");
    let mut out = String::from("measured\\prepared");
    for p in 0..cal.dim() {
        write!(out, ",{}", label(p)).unwrap();
    }
    out.push('\n');
    for m in 0..cal.dim() {
        out.push_str(&label(m));
        for p in 0..cal.dim() {
            write!(out, ",{:.6}", cal.get(m, p)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_layout() {
        let cal = ConfusionMatrix::new(2, vec![0.9, 0.2, 0.1, 0.8]).unwrap();
        let csv = confusion_csv(&cal, 1);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "measured\\prepared,0,1");
        assert_eq!(lines[1], "0,0.900000,0.200000");
        assert_eq!(lines[2], "1,0.100000,0.800000");
    }

    #[test]
    fn trace_names() {
        assert_eq!(trace_file_name(1.4), "trace_1.40.json");
    }
}
