//! Monte-Carlo harness for the table game.
//!
//! Every condition with the same obstacle count and geometry plays the same
//! sequence of environments, one per seed, so strategies can be compared
//! game by game. Results are collected in seed order, which makes reports
//! independent of the worker count.

mod assertions;
mod config;
mod output;
mod stats;

pub use assertions::{check_assertions, AssertionResult, TrendAssertion};
pub use config::{ConditionGrid, RunConfig, CONFIG_FORMAT_VERSION};
pub use output::{write_report_csv, write_table_csv, REPORT_COLUMNS};
pub use stats::sign_test_p;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::table_sim::{
    generate_environment_attempt, run_game, CommStrategy, Environment, FailureKind, GeometryMode,
    Protocol, SimParams, WorkspaceSpec,
};
use crate::{Error, Result};

pub const REPORT_FORMAT_VERSION: u32 = 1;

const PAIRING_NOTE: &str =
    "conditions sharing n and geometry play identical environments, one per seed";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Condition {
    pub protocol: Protocol,
    pub n: usize,
    pub geometry: GeometryMode,
    #[serde(default)]
    pub noise_cv: f64,
}

impl Condition {
    pub fn strategy(&self) -> CommStrategy {
        CommStrategy::new(self.protocol, self.noise_cv)
    }

    pub fn label(&self) -> String {
        self.protocol.label()
    }
}

/// Which generated environments count as games.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentFilter {
    /// Keep only environments a centralized team solves, resampling the seed
    /// on a fresh stream otherwise.
    pub require_centralized_success: bool,
    /// Generation attempts per seed before the seed is dropped.
    pub max_attempts: u32,
}

impl Default for EnvironmentFilter {
    fn default() -> Self {
        EnvironmentFilter {
            require_centralized_success: true,
            max_attempts: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub conditions: Vec<Condition>,
    #[serde(default = "default_games")]
    pub games_per_condition: u32,
    #[serde(default)]
    pub base_seed: u64,
    pub sim: SimParams,
    #[serde(default)]
    pub workspace: WorkspaceSpec,
    #[serde(default)]
    pub environment_filter: EnvironmentFilter,
}

fn default_games() -> u32 {
    1000
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.conditions.is_empty() {
            return Err(Error::Argument("conditions must be nonempty".into()));
        }
        if self.games_per_condition == 0 {
            return Err(Error::Argument("games_per_condition must be >= 1".into()));
        }
        if self.environment_filter.max_attempts == 0 {
            return Err(Error::Argument("max_attempts must be >= 1".into()));
        }
        self.base_seed
            .checked_add(u64::from(self.games_per_condition))
            .ok_or_else(|| Error::Argument("seed range overflows".into()))?;
        self.sim.validate()?;
        self.workspace.validate()?;
        for c in &self.conditions {
            c.geometry.validate()?;
            c.strategy().validate()?;
        }
        Ok(())
    }

    /// SHA-256 over the crate version and the canonical JSON of the config.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(concat!("rolecomms ", env!("CARGO_PKG_VERSION"), "\n").as_bytes());
        h.update(serde_json::to_vec(self).expect("config serializes"));
        hex::encode(h.finalize())
    }

    pub fn seeds(&self) -> std::ops::Range<u64> {
        self.base_seed..self.base_seed + u64::from(self.games_per_condition)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub seed: u64,
    /// Generation attempt that produced the environment.
    pub attempt: u64,
    /// Truncated content hash of the environment.
    pub env_hash: String,
    pub success: bool,
    pub steps: u32,
    pub failure_kind: FailureKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub label: String,
    pub condition: Condition,
    pub games: u32,
    pub successes: u32,
    pub lambda: f64,
    pub collisions: u32,
    pub timeouts: u32,
    /// Mean length of failed games; absent when nothing failed.
    pub failure_mean_steps: Option<f64>,
    /// Seeds dropped because no acceptable environment was generated.
    pub excluded_seeds: Vec<u64>,
    pub outcomes: Vec<GameRecord>,
}

impl ConditionReport {
    /// Aggregate per-seed outcomes. The result does not depend on the order
    /// of `outcomes` or `excluded`.
    pub fn aggregate(
        condition: Condition,
        mut outcomes: Vec<GameRecord>,
        mut excluded: Vec<u64>,
    ) -> Self {
        outcomes.sort_by_key(|o| o.seed);
        excluded.sort_unstable();
        let games = outcomes.len() as u32;
        let successes = outcomes.iter().filter(|o| o.success).count() as u32;
        let count = |k| outcomes.iter().filter(|o| o.failure_kind == k).count() as u32;
        let failures: Vec<u32> = outcomes
            .iter()
            .filter(|o| !o.success)
            .map(|o| o.steps)
            .collect();
        let failure_mean_steps = (!failures.is_empty())
            .then(|| failures.iter().map(|&s| f64::from(s)).sum::<f64>() / failures.len() as f64);
        ConditionReport {
            label: condition.label(),
            condition,
            games,
            successes,
            lambda: if games == 0 {
                0.0
            } else {
                f64::from(successes) / f64::from(games)
            },
            collisions: count(FailureKind::Collision),
            timeouts: count(FailureKind::Timeout),
            failure_mean_steps,
            excluded_seeds: excluded,
            outcomes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub format_version: u32,
    pub fingerprint: String,
    pub pairing: String,
    pub config: BenchmarkConfig,
    pub conditions: Vec<ConditionReport>,
}

impl BenchmarkReport {
    /// The unique condition with this label, obstacle count and noise level.
    pub fn find(&self, label: &str, n: usize, noise_cv: f64) -> Result<&ConditionReport> {
        let mut hits = self
            .conditions
            .iter()
            .filter(|c| c.label == label && c.condition.n == n && c.condition.noise_cv == noise_cv);
        let first = hits.next().ok_or_else(|| {
            Error::Comparison(format!("no condition {label} n={n} cv={noise_cv}"))
        })?;
        if hits.next().is_some() {
            return Err(Error::Comparison(format!(
                "condition {label} n={n} cv={noise_cv} is ambiguous"
            )));
        }
        Ok(first)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    /// λ(a) − λ(b).
    pub delta_lambda: f64,
    /// Games won by `a` and lost by `b`.
    pub a_only: u64,
    /// Games won by `b` and lost by `a`.
    pub b_only: u64,
    pub p_value: f64,
}

/// Paired comparison of two conditions played on the same environments.
pub fn compare_conditions(a: &ConditionReport, b: &ConditionReport) -> Result<Comparison> {
    if a.outcomes.len() != b.outcomes.len() {
        return Err(Error::Comparison(
            "conditions played different numbers of games".into(),
        ));
    }
    let (mut a_only, mut b_only) = (0u64, 0u64);
    for (x, y) in a.outcomes.iter().zip(&b.outcomes) {
        if x.seed != y.seed || x.env_hash != y.env_hash {
            return Err(Error::Comparison(format!(
                "seed {} / {} environments differ; conditions are not paired",
                x.seed, y.seed
            )));
        }
        match (x.success, y.success) {
            (true, false) => a_only += 1,
            (false, true) => b_only += 1,
            _ => {}
        }
    }
    Ok(Comparison {
        delta_lambda: a.lambda - b.lambda,
        a_only,
        b_only,
        p_value: sign_test_p(a_only, b_only),
    })
}

struct PreparedEnv {
    seed: u64,
    attempt: u64,
    hash: String,
    env: Environment,
}

type EnvGroup = (usize, GeometryMode);

fn prepare_environment(
    config: &BenchmarkConfig,
    group: EnvGroup,
    seed: u64,
) -> Result<Option<PreparedEnv>> {
    let (n, geometry) = group;
    let filter = config.environment_filter;
    let centralized = CommStrategy::new(Protocol::Centralized, 0.0);
    for attempt in 0..u64::from(filter.max_attempts) {
        let env = match generate_environment_attempt(seed, attempt, n, geometry, &config.workspace)
        {
            Ok(env) => env,
            Err(Error::Generation { reason, .. }) => {
                log::warn!("seed {seed} attempt {attempt}: {reason}");
                continue;
            }
            Err(e) => return Err(e),
        };
        if filter.require_centralized_success
            && !run_game(&env, &centralized, &config.sim, seed)?.success
        {
            continue;
        }
        let mut hash = env.content_hash();
        hash.truncate(16);
        return Ok(Some(PreparedEnv {
            seed,
            attempt,
            hash,
            env,
        }));
    }
    log::warn!(
        "seed {seed} (n={n}) dropped after {} attempts",
        filter.max_attempts
    );
    Ok(None)
}

/// Run every condition of `config` on a pool of `threads` workers
/// (`None` lets rayon decide). The report does not depend on `threads`.
pub fn run_benchmark(config: &BenchmarkConfig, threads: Option<usize>) -> Result<BenchmarkReport> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Argument(format!("cannot build worker pool: {e}")))?;
    pool.install(|| run_in_pool(config))
}

fn run_in_pool(config: &BenchmarkConfig) -> Result<BenchmarkReport> {
    let mut groups: Vec<EnvGroup> = Vec::new();
    for c in &config.conditions {
        let g = (c.n, c.geometry);
        if !groups.contains(&g) {
            groups.push(g);
        }
    }
    let seeds: Vec<u64> = config.seeds().collect();
    let mut prepared: Vec<(EnvGroup, Vec<PreparedEnv>, Vec<u64>)> = Vec::new();
    for g in groups {
        let envs = seeds
            .par_iter()
            .map(|&s| prepare_environment(config, g, s))
            .collect::<Result<Vec<_>>>()?;
        let excluded = seeds
            .iter()
            .zip(&envs)
            .filter(|(_, e)| e.is_none())
            .map(|(s, _)| *s)
            .collect();
        prepared.push((g, envs.into_iter().flatten().collect(), excluded));
    }

    let mut conditions = Vec::with_capacity(config.conditions.len());
    for c in &config.conditions {
        let (_, envs, excluded) = prepared
            .iter()
            .find(|(g, _, _)| *g == (c.n, c.geometry))
            .expect("every condition has a group");
        let strategy = c.strategy();
        let outcomes = envs
            .par_iter()
            .map(|p| {
                let o = run_game(&p.env, &strategy, &config.sim, p.seed)?;
                Ok(GameRecord {
                    seed: p.seed,
                    attempt: p.attempt,
                    env_hash: p.hash.clone(),
                    success: o.success,
                    steps: o.steps,
                    failure_kind: o.failure_kind,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        conditions.push(ConditionReport::aggregate(*c, outcomes, excluded.clone()));
    }
    Ok(BenchmarkReport {
        format_version: REPORT_FORMAT_VERSION,
        fingerprint: config.fingerprint(),
        pairing: PAIRING_NOTE.into(),
        config: config.clone(),
        conditions,
    })
}
