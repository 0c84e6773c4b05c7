//! JSON scenario configuration.
//!
//! Example:
//! ```json
//! {
//!   "n": 100, "k": 10, "q": 16, "M": 10, "alpha": 0.8,
//!   "gamma": [0.2907, 0.6591, 0.0430, 0.0072],
//!   "sweep": { "variable": "M", "values": [0, 10, 20, 50, 100] },
//!   "sim": { "trials": 100000, "seed": 7 }
//! }
//! ```
//!
//! `gamma` lists the connectivity probabilities for h = 1, 2, ... and is
//! mutually exclusive with `geometry`, which derives the distribution from a
//! square hub grid (radius `r`, spacing `d`).

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub n: usize,
    pub k: u32,
    pub q: u32,
    #[serde(rename = "M")]
    pub m: u32,
    pub alpha: f64,
    #[serde(default)]
    pub gamma: Option<Vec<f64>>,
    #[serde(default)]
    pub geometry: Option<GeometryConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub sim: Option<SimConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub r: f64,
    pub d: f64,
    #[serde(default = "default_resolution")]
    pub resolution: u32,
}

fn default_resolution() -> u32 {
    2001
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "M")]
    Memory,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "n")]
    LibrarySize,
    #[serde(rename = "r")]
    Radius,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::Memory => "M",
            SweepVariable::Alpha => "alpha",
            SweepVariable::LibrarySize => "n",
            SweepVariable::Radius => "r",
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Config = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("malformed config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(CliError::Config("n must be >= 1".into()));
        }
        if self.k == 0 {
            return Err(CliError::Config("k must be >= 1".into()));
        }
        if !supported_field_order(self.q) {
            return Err(CliError::Config(format!(
                "unsupported field order q = {}; supported: powers of two in 2..=256",
                self.q
            )));
        }
        if self.alpha < 0.0 || !self.alpha.is_finite() {
            return Err(CliError::Config("alpha must be >= 0".into()));
        }
        match (&self.gamma, &self.geometry) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("gamma and geometry are mutually exclusive".into()))
            }
            (None, None) => {
                return Err(CliError::Config("one of gamma or geometry is required".into()))
            }
            (Some(g), None) if g.is_empty() => {
                return Err(CliError::Config("gamma must be nonempty".into()))
            }
            _ => {}
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(CliError::Config("sweep.values must be nonempty".into()));
            }
            if sweep.variable == SweepVariable::Radius && self.geometry.is_none() {
                return Err(CliError::Config("sweeping r requires a geometry section".into()));
            }
        }
        Ok(())
    }
}

pub fn supported_field_order(q: u32) -> bool {
    q.is_power_of_two() && (2..=256).contains(&q)
}

/// Extension degree m with q = 2^m; caller checks support first.
pub fn degree_of(q: u32) -> u32 {
    q.trailing_zeros()
}
