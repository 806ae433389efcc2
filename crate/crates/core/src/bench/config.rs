//! JSON run configuration: a benchmark plus the trends it should show.

use serde::{Deserialize, Serialize};

use super::{BenchmarkConfig, Condition, EnvironmentFilter, TrendAssertion};
use crate::table_sim::{GeometryMode, Protocol, SimParams, WorkspaceSpec};
use crate::{Error, Result};

pub const CONFIG_FORMAT_VERSION: u32 = 1;

/// A cartesian block of conditions: every protocol at every `n` and noise
/// level. Expanded noise-major, then by `n`, then protocol order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionGrid {
    pub protocols: Vec<Protocol>,
    pub n: Vec<usize>,
    pub geometry: GeometryMode,
    #[serde(default = "zero_noise")]
    pub noise_cv: Vec<f64>,
}

fn zero_noise() -> Vec<f64> {
    vec![0.0]
}

impl ConditionGrid {
    pub fn expand(&self) -> Vec<Condition> {
        let mut out = Vec::new();
        for &noise_cv in &self.noise_cv {
            for &n in &self.n {
                for &protocol in &self.protocols {
                    out.push(Condition {
                        protocol,
                        n,
                        geometry: self.geometry,
                        noise_cv,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "format_version")]
    pub format_version: u32,
    /// Free-form note, ignored by the harness.
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub conditions: Vec<Condition>,
    #[serde(default)]
    pub grid: Vec<ConditionGrid>,
    #[serde(default = "games_per_condition")]
    pub games_per_condition: u32,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub sim: SimParams,
    #[serde(default)]
    pub workspace: WorkspaceSpec,
    #[serde(default)]
    pub environment_filter: EnvironmentFilter,
    #[serde(default, rename = "assert")]
    pub assertions: Vec<TrendAssertion>,
}

fn format_version() -> u32 {
    CONFIG_FORMAT_VERSION
}

fn games_per_condition() -> u32 {
    1000
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        if cfg.format_version != CONFIG_FORMAT_VERSION {
            return Err(Error::Argument(format!(
                "unsupported format_version {} (expected {CONFIG_FORMAT_VERSION})",
                cfg.format_version
            )));
        }
        Ok(cfg)
    }

    pub fn all_conditions(&self) -> Vec<Condition> {
        let mut out = self.conditions.clone();
        for g in &self.grid {
            out.extend(g.expand());
        }
        out
    }

    pub fn benchmark(&self) -> Result<BenchmarkConfig> {
        let cfg = BenchmarkConfig {
            conditions: self.all_conditions(),
            games_per_condition: self.games_per_condition,
            base_seed: self.base_seed,
            sim: self.sim,
            workspace: self.workspace,
            environment_filter: self.environment_filter,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
