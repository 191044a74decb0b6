//! TOML experiment configuration with an explicit schema version.
//!
//! ```toml
//! schema_version = 1
//!
//! [generator]
//! matrix = [[0.0, 1.0], [1.0, 0.0]]   # diagonal is derived, row sums zero
//!
//! [initial]
//! nu = [0.5, 0.5]
//! beta = [0.9, 0.1]
//! beta2 = [0.1, 0.9]                  # optional
//!
//! [observation]
//! h = [0.0, 1.0]
//! sigma = 0.5
//!
//! [run]
//! horizon = 10.0
//! dt = 0.001
//! replicates = 50
//! seed = 42
//! scheme = "split-bayes"              # or "euler-projected"
//! noise_off = false                   # optional deterministic hook
//!
//! [checks]                            # optional, defaults below
//! slack_mult = 1.1
//! slack_add = 1e-6
//! window = [2.0, 8.0]                 # default [0.2 T, 0.8 T]
//! ```

use nalgebra::DMatrix;
use serde::Deserialize;
use std::path::Path;

use crate::error::{Error, Result};
use crate::filter::IntegratorScheme;
use crate::markov::{GeneratorMatrix, ProbabilitySimplex};
use crate::observation::ObservationModel;
use crate::stability::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub schema_version: u32,
    pub generator: GeneratorSection,
    pub initial: InitialSection,
    pub observation: ObservationSection,
    pub run: RunSection,
    #[serde(default)]
    pub checks: ChecksSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSection {
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub nu: Vec<f64>,
    pub beta: Vec<f64>,
    #[serde(default)]
    pub beta2: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationSection {
    pub h: Vec<f64>,
    pub sigma: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub horizon: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_scheme")]
    pub scheme: String,
    #[serde(default)]
    pub noise_off: bool,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ChecksSection {
    pub slack_mult: Option<f64>,
    pub slack_add: Option<f64>,
    pub window: Option<[f64; 2]>,
}

fn default_dt() -> f64 {
    1e-3
}

fn default_replicates() -> usize {
    1
}

fn default_scheme() -> String {
    "split-bayes".into()
}

impl ConfigDocument {
    pub fn from_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(&path)?;
        Self::from_str(&text)
    }

    /// Validates every field and assembles the domain-level config.
    pub fn build(&self) -> Result<ExperimentConfig> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        let d = self.generator.matrix.len();
        for (i, row) in self.generator.matrix.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Config(format!(
                    "generator.matrix[{i}]: expected {d} entries, got {}",
                    row.len()
                )));
            }
        }
        let flat: Vec<f64> = self.generator.matrix.iter().flatten().copied().collect();
        let generator =
            GeneratorMatrix::from_rates(DMatrix::from_row_slice(d, d, &flat)).map_err(|e| {
                match e {
                    Error::NonPositiveOffDiagonal { row, col, value } => Error::Config(format!(
                        "generator.matrix[{row}][{col}]: off-diagonal must be > 0, got {value}"
                    )),
                    Error::DimensionTooSmall(n) => {
                        Error::Config(format!("generator.matrix: need dimension >= 2, got {n}"))
                    }
                    other => other,
                }
            })?;

        let simplex = |name: &str, v: &[f64]| -> Result<ProbabilitySimplex> {
            ProbabilitySimplex::from_slice(v)
                .map_err(|_| Error::Config(format!("initial.{name}: invalid probability vector")))
        };
        let nu = simplex("nu", &self.initial.nu)?;
        let beta = simplex("beta", &self.initial.beta)?;
        let beta2 = self
            .initial
            .beta2
            .as_ref()
            .map(|b| simplex("beta2", b))
            .transpose()?;

        let model = ObservationModel::from_slice(&self.observation.h, self.observation.sigma)?;

        let scheme = match self.run.scheme.as_str() {
            "split-bayes" => IntegratorScheme::SplitBayes,
            "euler-projected" => IntegratorScheme::EulerProjected,
            other => {
                return Err(Error::Config(format!(
                    "run.scheme: unknown scheme \"{other}\" (expected \"split-bayes\" or \"euler-projected\")"
                )))
            }
        };

        let horizon = self.run.horizon;
        let window = self
            .checks
            .window
            .map(|w| (w[0], w[1]))
            .unwrap_or((0.2 * horizon, 0.8 * horizon));

        let cfg = ExperimentConfig {
            generator,
            nu,
            beta,
            beta2,
            model,
            horizon,
            dt: self.run.dt,
            replicates: self.run.replicates,
            seed: self.run.seed,
            scheme,
            noise_off: self.run.noise_off,
            slack_mult: self.checks.slack_mult.unwrap_or(1.1),
            slack_add: self.checks.slack_add.unwrap_or(1e-6),
            window,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
