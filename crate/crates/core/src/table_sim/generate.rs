use serde::{Deserialize, Serialize};

use super::{Agent, EnvObstacle, Environment, GeometryMode};
use crate::numerics::{Rng, Vec2};
use crate::{Error, Result};

/// Stream id reserved for environment generation; attempt `k` uses the
/// `k`-th child of this stream.
pub(crate) const ENV_STREAM: u64 = 1 << 32;

/// Geometry of the randomly generated corridor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceSpec {
    pub start: Vec2,
    pub goal: Vec2,
    pub half_length: f64,
    /// Obstacle centers lie within this lateral distance of the start-goal line.
    pub corridor_half_width: f64,
    /// Minimum gap between an obstacle boundary and the start point.
    pub start_clearance: f64,
    /// Minimum gap between an obstacle boundary and the goal point.
    pub goal_clearance: f64,
    /// Placement attempts per obstacle before giving up.
    pub retry_cap: u32,
}

impl Default for WorkspaceSpec {
    fn default() -> Self {
        WorkspaceSpec {
            start: Vec2::ZERO,
            goal: Vec2::new(50.0, 0.0),
            half_length: 1.0,
            corridor_half_width: 7.0,
            start_clearance: 3.0,
            goal_clearance: 2.0,
            retry_cap: 1000,
        }
    }
}

impl WorkspaceSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite()
            || !self.goal.is_finite()
            || self.start.distance(self.goal) <= 0.0
        {
            return Err(Error::Argument(
                "start and goal must be finite and distinct".into(),
            ));
        }
        let named = [
            ("half_length", self.half_length),
            ("corridor_half_width", self.corridor_half_width),
            ("start_clearance", self.start_clearance),
            ("goal_clearance", self.goal_clearance),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Argument(format!("{name} must be finite and >= 0")));
            }
        }
        if self.half_length <= 0.0 {
            return Err(Error::Argument("half_length must be > 0".into()));
        }
        if self.start_clearance < self.half_length {
            return Err(Error::Argument(
                "start_clearance must cover the table".into(),
            ));
        }
        if self.retry_cap == 0 {
            return Err(Error::Argument("retry_cap must be >= 1".into()));
        }
        Ok(())
    }
}

/// Sample `n` obstacles in the corridor for `seed`.
pub fn generate_environment(
    seed: u64,
    n: usize,
    geometry: GeometryMode,
    workspace: &WorkspaceSpec,
) -> Result<Environment> {
    generate_environment_attempt(seed, 0, n, geometry, workspace)
}

/// Like [`generate_environment`] but drawing from an independent stream per
/// `attempt`, so callers can resample a seed deterministically.
pub fn generate_environment_attempt(
    seed: u64,
    attempt: u64,
    n: usize,
    geometry: GeometryMode,
    workspace: &WorkspaceSpec,
) -> Result<Environment> {
    geometry.validate()?;
    workspace.validate()?;
    let mut rng = Rng::with_stream(seed, ENV_STREAM).child(attempt);
    let axis = workspace.goal - workspace.start;
    let lateral = axis.perp() / axis.norm();
    let mut obstacles = Vec::with_capacity(n);
    for i in 0..n {
        let radius = match geometry {
            GeometryMode::KnownRadius { radius } => radius,
            GeometryMode::UnknownRadius { r_min, r_max } => rng.uniform_range(r_min, r_max),
        };
        let mut placed = None;
        for _ in 0..workspace.retry_cap {
            let t = rng.uniform();
            let w = rng.uniform_range(
                -workspace.corridor_half_width,
                workspace.corridor_half_width,
            );
            let c = workspace.start + axis * t + lateral * w;
            if c.distance(workspace.start) >= workspace.start_clearance + radius
                && c.distance(workspace.goal) >= workspace.goal_clearance + radius
            {
                placed = Some(c);
                break;
            }
        }
        let center = placed.ok_or_else(|| Error::Generation {
            seed,
            reason: format!(
                "obstacle {i} not placed after {} tries",
                workspace.retry_cap
            ),
        })?;
        let owner = if i % 2 == 0 {
            Agent::Agent1
        } else {
            Agent::Agent2
        };
        obstacles.push(EnvObstacle {
            center,
            radius,
            owner,
        });
    }
    Ok(Environment {
        start: workspace.start,
        goal: workspace.goal,
        half_length: workspace.half_length,
        geometry,
        obstacles,
    })
}
