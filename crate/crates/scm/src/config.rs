//! TOML run configuration for `scm vqe`.
//!
//! Every section and key is optional; missing values take the defaults
//! below. Command-line flags are applied on top of the parsed file.
//!
//! ```toml
//! [molecule]
//! fixture_dir = "data"
//! pattern = "f2_sto3g_frozencore_{R}.fcidump"
//! bond_lengths = [1.0, 1.2, 1.4]
//!
//! [symmetry]          # unset values come from the FCIDUMP header
//! irrep = "Ag"
//!
//! [ansatz]
//! scheme = "y"        # or "zxz"
//! depth = 2
//!
//! [spsa]
//! iterations = 200
//! restarts = 1
//!
//! [estimator]
//! mode = "sampled"    # or "exact"
//!
//! [readout]
//! flip = 0.02
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use scm_core::mitigation::ReadoutNoiseModel;
use scm_core::pointgroup::PointGroupTable;
use scm_core::vqe::{
    AnsatzSpec, EnergyMode, ReadoutConfig, RotationScheme, SpsaParams, VqeOptions,
};

use crate::error::{CliError, Result};
use crate::pipeline::{ConstraintInput, Padding};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub molecule: MoleculeSection,
    pub symmetry: SymmetrySection,
    pub hamiltonian: HamiltonianSection,
    pub ansatz: AnsatzSection,
    pub spsa: SpsaSection,
    pub estimator: EstimatorSection,
    pub readout: Option<ReadoutSection>,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MoleculeSection {
    /// Relative paths are resolved against the configuration file.
    pub fixture_dir: PathBuf,
    /// File name template; `{R}` becomes the bond length with two decimals.
    pub pattern: String,
    pub bond_lengths: Vec<f64>,
    pub point_group: String,
}

impl Default for MoleculeSection {
    fn default() -> Self {
        Self {
            fixture_dir: PathBuf::from("data"),
            pattern: "f2_sto3g_frozencore_{R}.fcidump".into(),
            bond_lengths: (0..15).map(|i| 1.0 + 0.1 * i as f64).collect(),
            point_group: "D2h".into(),
        }
    }
}

impl MoleculeSection {
    pub fn fixture_path(&self, bond_length: f64) -> PathBuf {
        self.fixture_dir
            .join(self.pattern.replace("{R}", &format!("{bond_length:.2}")))
    }

    pub fn group(&self) -> Result<&'static PointGroupTable> {
        PointGroupTable::by_name(&self.point_group).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymmetrySection {
    pub n: Option<u32>,
    pub sz: Option<f64>,
    pub irrep: Option<String>,
    pub s: Option<f64>,
}

impl SymmetrySection {
    pub fn constraints(&self) -> ConstraintInput {
        ConstraintInput {
            n: self.n,
            sz: self.sz.map(|v| v.to_string()),
            irrep: self.irrep.clone(),
            s: self.s.map(|v| v.to_string()),
        }
    }
}

/// `padding = 0.0` or `padding = "penalty"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PaddingSetting {
    Value(f64),
    Named(PaddingName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PaddingName {
    Penalty,
}

impl PaddingSetting {
    pub fn padding(self) -> Padding {
        match self {
            PaddingSetting::Value(v) => Padding::Value(v),
            PaddingSetting::Named(PaddingName::Penalty) => Padding::Penalty,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.eq_ignore_ascii_case("penalty") {
            return Ok(PaddingSetting::Named(PaddingName::Penalty));
        }
        text.parse().map(PaddingSetting::Value).map_err(|_| {
            CliError::Config(format!(
                "padding `{text}` is neither a number nor `penalty`"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HamiltonianSection {
    /// The optimizer sees the padded states, so a zero padding ~196 Eh above
    /// an F2 block makes the energy landscape far too steep for SPSA.
    pub padding: PaddingSetting,
    pub cutoff: f64,
}

impl Default for HamiltonianSection {
    fn default() -> Self {
        Self {
            padding: PaddingSetting::Named(PaddingName::Penalty),
            cutoff: scm_core::pauli::DEFAULT_CUTOFF,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Y,
    Zxz,
}

impl From<SchemeName> for RotationScheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Y => RotationScheme::Y,
            SchemeName::Zxz => RotationScheme::Zxz,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnsatzSection {
    pub scheme: SchemeName,
    pub depth: usize,
    /// Directed `[control, target]` pairs, 0-based. Linear chain if absent.
    pub entangler: Option<Vec<[usize; 2]>>,
}

impl Default for AnsatzSection {
    fn default() -> Self {
        Self {
            scheme: SchemeName::Y,
            depth: 1,
            entangler: None,
        }
    }
}

impl AnsatzSection {
    pub fn spec(&self, qubits: usize) -> Result<AnsatzSpec> {
        match &self.entangler {
            None => Ok(AnsatzSpec::linear(qubits, self.depth, self.scheme.into())),
            Some(pairs) => Ok(AnsatzSpec::new(
                qubits,
                self.depth,
                self.scheme.into(),
                pairs.iter().map(|p| (p[0], p[1])).collect(),
            )?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpsaSection {
    pub a: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub iterations: usize,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for SpsaSection {
    fn default() -> Self {
        let p = SpsaParams::default();
        Self {
            a: p.a,
            big_a: p.big_a,
            c: p.c,
            alpha: p.alpha,
            gamma: p.gamma,
            iterations: p.iterations,
            seed: 0,
            restarts: 1,
        }
    }
}

impl SpsaSection {
    pub fn params(&self) -> SpsaParams {
        SpsaParams {
            a: self.a,
            big_a: self.big_a,
            c: self.c,
            alpha: self.alpha,
            gamma: self.gamma,
            iterations: self.iterations,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorSection {
    pub mode: ModeName,
    /// Shots per measurement group for each perturbed evaluation.
    pub perturbed_shots: u32,
    /// Shots per measurement group for each window evaluation.
    pub window_shots: u32,
    pub window: usize,
    pub seed: u64,
}

impl Default for EstimatorSection {
    fn default() -> Self {
        Self {
            mode: ModeName::Sampled,
            perturbed_shots: 1024,
            window_shots: 8192,
            window: 25,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReadoutSection {
    /// Symmetric bit-flip probability on every qubit.
    pub flip: f64,
    pub mitigate: bool,
    pub calibration_shots: u32,
    pub refresh_every: usize,
}

impl Default for ReadoutSection {
    fn default() -> Self {
        Self {
            flip: 0.02,
            mitigate: true,
            calibration_shots: 8192,
            refresh_every: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("results"),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads `path`; a relative fixture directory is taken relative to it.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_toml(&text)?;
        if cfg.molecule.fixture_dir.is_relative() {
            if let Some(parent) = path.parent() {
                cfg.molecule.fixture_dir = parent.join(&cfg.molecule.fixture_dir);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        if self.molecule.bond_lengths.is_empty() {
            return Err(CliError::Config("no bond lengths given".into()));
        }
        if self
            .molecule
            .bond_lengths
            .iter()
            .any(|r| !(r.is_finite() && *r > 0.0))
        {
            return Err(CliError::Config("bond lengths must be positive".into()));
        }
        if !self.molecule.pattern.contains("{R}") && self.molecule.bond_lengths.len() > 1 {
            return Err(CliError::Config("fixture pattern lacks `{R}`".into()));
        }
        self.molecule.group()?;
        self.spsa
            .params()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.spsa.restarts == 0 {
            return Err(CliError::Config("spsa.restarts must be at least 1".into()));
        }
        if self.estimator.window > self.spsa.iterations {
            return Err(CliError::Config(
                "estimator.window exceeds spsa.iterations".into(),
            ));
        }
        if self.estimator.mode == ModeName::Sampled
            && (self.estimator.perturbed_shots == 0 || self.estimator.window_shots == 0)
        {
            return Err(CliError::Config("shot counts must be positive".into()));
        }
        if let Some(r) = &self.readout {
            if !(0.0..0.5).contains(&r.flip) {
                return Err(CliError::Config("readout.flip must lie in [0, 0.5)".into()));
            }
            if self.estimator.mode == ModeName::Exact {
                return Err(CliError::Config(
                    "readout noise needs estimator.mode = \"sampled\"".into(),
                ));
            }
            if r.refresh_every == 0 || r.calibration_shots == 0 {
                return Err(CliError::Config(
                    "readout calibration cadence and shots must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn vqe_options(&self, qubits: usize) -> Result<VqeOptions> {
        let mode = match self.estimator.mode {
            ModeName::Exact => EnergyMode::Exact,
            ModeName::Sampled => EnergyMode::Sampled {
                perturbed_shots: self.estimator.perturbed_shots,
                window_shots: self.estimator.window_shots,
            },
        };
        let readout = match &self.readout {
            None => None,
            Some(r) => Some(ReadoutConfig {
                noise: ReadoutNoiseModel::symmetric(qubits, r.flip)?,
                mitigate: r.mitigate,
                calibration_shots: r.calibration_shots,
                refresh_every: r.refresh_every,
            }),
        };
        Ok(VqeOptions {
            mode,
            readout,
            window: self.estimator.window,
            sampling_seed: self.estimator.seed,
            initial: None,
        })
    }
}
