//! Run configuration: a JSON document whose fields can all be overridden on
//! the command line.

use std::fmt;
use std::path::{Path, PathBuf};

use hypclif_core::{DiffConfig, MAX_DIM, MIN_DIM};
use serde::{Deserialize, Serialize};

/// Invalid configuration or unusable input; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    AlgebraIdentities,
    KernelResiduals,
    Cauchy,
    BorelPompeiu,
    Green,
    Teodorescu,
    Plemelj,
    Poisson,
    Conformal,
    Calibrate,
    Convergence,
}

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::AlgebraIdentities,
        Experiment::KernelResiduals,
        Experiment::Cauchy,
        Experiment::BorelPompeiu,
        Experiment::Green,
        Experiment::Teodorescu,
        Experiment::Plemelj,
        Experiment::Poisson,
        Experiment::Conformal,
        Experiment::Calibrate,
        Experiment::Convergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::AlgebraIdentities => "algebra-identities",
            Experiment::KernelResiduals => "kernel-residuals",
            Experiment::Cauchy => "cauchy",
            Experiment::BorelPompeiu => "borel-pompeiu",
            Experiment::Green => "green",
            Experiment::Teodorescu => "teodorescu",
            Experiment::Plemelj => "plemelj",
            Experiment::Poisson => "poisson",
            Experiment::Conformal => "conformal",
            Experiment::Calibrate => "calibrate",
            Experiment::Convergence => "convergence",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Finite-difference settings shared by all residual checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdSettings {
    pub step: f64,
    pub levels: usize,
}

impl Default for FdSettings {
    fn default() -> Self {
        let d = DiffConfig::default();
        FdSettings {
            step: d.step,
            levels: d.richardson_levels,
        }
    }
}

/// Sample sizes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ProbeCounts {
    /// Random multivectors (or triples) per algebra check.
    pub algebra: usize,
    /// Random pairs for the exact point-source identities.
    pub identity_pairs: usize,
    /// Random pairs for closed-form versus FD kernel derivatives.
    pub kernel_pairs: usize,
    /// Probe points per kernel equation residual.
    pub residual_points: usize,
    /// Random half-space transforms for the covariance checks.
    pub transforms: usize,
    /// Probe points per transform.
    pub conformal_probes: usize,
    /// Sphere points for the nested Hardy projection checks.
    pub hardy_points: usize,
}

impl Default for ProbeCounts {
    fn default() -> Self {
        ProbeCounts {
            algebra: 1000,
            identity_pairs: 500,
            kernel_pairs: 100,
            residual_points: 50,
            transforms: 20,
            conformal_probes: 20,
            hardy_points: 3,
        }
    }
}

/// The test ball `|x - height e_n| <= radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Region {
    pub height: f64,
    pub radius: f64,
}

impl Default for Region {
    fn default() -> Self {
        Region {
            height: 2.0,
            radius: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

fn one_or_many<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(k) => vec![k],
        OneOrMany::Many(v) => v,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentConfig {
    /// Dimensions to run; a single number is accepted.
    #[serde(deserialize_with = "one_or_many")]
    pub dim: Vec<usize>,
    /// Quadrature orders, ascending.
    pub orders: Vec<usize>,
    pub fd: FdSettings,
    pub seed: u64,
    pub probes: ProbeCounts,
    pub region: Region,
    pub out: PathBuf,
    pub format: Format,
    pub experiments: Vec<Experiment>,
    /// Multiplies every tolerance of the defaults table.
    pub tol_scale: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dim: vec![3],
            orders: vec![16, 32, 64],
            fd: FdSettings::default(),
            seed: 0,
            probes: ProbeCounts::default(),
            region: Region::default(),
            out: PathBuf::from("hypclif-report.csv"),
            format: Format::Csv,
            experiments: Experiment::ALL.to_vec(),
            tol_scale: 1.0,
        }
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError(format!("invalid config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn diff(&self) -> DiffConfig {
        DiffConfig {
            step: self.fd.step,
            richardson_levels: self.fd.levels,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dim.is_empty() {
            return bad("dim must name at least one dimension");
        }
        if let Some(n) = self.dim.iter().find(|n| !(MIN_DIM..=MAX_DIM).contains(*n)) {
            return bad(format!("dim {n} outside [{MIN_DIM}, {MAX_DIM}]"));
        }
        if self.dim.windows(2).any(|w| w[0] >= w[1]) {
            return bad("dim values must be strictly ascending");
        }
        if self.orders.is_empty() {
            return bad("orders must not be empty");
        }
        if self.orders.windows(2).any(|w| w[0] >= w[1]) {
            return bad("orders must be strictly ascending");
        }
        if let Some(o) = self.orders.iter().find(|o| !(4..=256).contains(*o)) {
            return bad(format!("order {o} outside [4, 256]"));
        }
        self.diff()
            .validate()
            .map_err(|e| ConfigError(format!("fd settings: {e}")))?;
        let p = &self.probes;
        let counts = [
            p.algebra,
            p.identity_pairs,
            p.kernel_pairs,
            p.residual_points,
            p.transforms,
            p.conformal_probes,
            p.hardy_points,
        ];
        if counts.contains(&0) {
            return bad("probe counts must be positive");
        }
        if p.hardy_points > 16 {
            return bad("hardy-points is limited to 16 (each costs ~40 s)");
        }
        let r = &self.region;
        if !(r.radius > 0.0 && r.radius.is_finite() && r.height.is_finite() && r.height - r.radius > 0.0) {
            return bad("region must be a ball strictly inside upper half space");
        }
        if self.experiments.is_empty() {
            return bad("no experiment selected");
        }
        let mut seen = self.experiments.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.experiments.len() {
            return bad("an experiment is selected twice");
        }
        if !(self.tol_scale.is_finite() && self.tol_scale > 0.0) {
            return bad("tol-scale must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_round_trips() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_documents_fill_defaults() {
        let cfg =
            ExperimentConfig::from_json(r#"{"dim": 4, "experiments": ["cauchy", "green"], "tol-scale": 2}"#).unwrap();
        assert_eq!(cfg.dim, vec![4]);
        assert_eq!(cfg.experiments, vec![Experiment::Cauchy, Experiment::Green]);
        assert_eq!(cfg.tol_scale, 2.0);
        assert_eq!(cfg.orders, vec![16, 32, 64]);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(ExperimentConfig::from_json("{").is_err());
        assert!(ExperimentConfig::from_json(r#"{"dimm": 3}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"experiments": ["nope"]}"#).is_err());
    }

    #[test]
    fn invariants_are_checked() {
        let with = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig::default();
            f(&mut c);
            c.validate()
        };
        assert!(with(|c| c.dim = vec![2]).is_err());
        assert!(with(|c| c.dim = vec![4, 3]).is_err());
        assert!(with(|c| c.orders = vec![32, 16]).is_err());
        assert!(with(|c| c.orders = vec![]).is_err());
        assert!(with(|c| c.tol_scale = 0.0).is_err());
        assert!(with(|c| c.region.height = 0.4).is_err());
        assert!(with(|c| c.experiments = vec![Experiment::Cauchy, Experiment::Cauchy]).is_err());
        assert!(with(|c| c.fd.levels = 0).is_err());
    }
}
