//! Two-agent table-carrying game.
//!
//! Two point agents hold the ends of a rigid table and carry it from `start`
//! to `goal`. Each agent sees only the obstacles tagged with its own id and
//! learns about the rest through explicit messages or, in speaker/listener
//! roles, by inverting its partner's potential-field velocity.

mod comms;
mod dynamics;
mod game;
mod generate;
mod inference;

pub use comms::{build_message, corrupt, AgentBelief, KnownObstacle};
pub use dynamics::{segment_point_distance, table_collides, table_step, TableState};
pub(crate) use game::csv_error;
pub use game::{
    run_game, run_game_with_trajectory, write_trajectory_csv, FailureKind, Role, SimOutcome,
    TrajectoryRecord, TRAJECTORY_COLUMNS,
};
pub use generate::{generate_environment, generate_environment_attempt, WorkspaceSpec};
pub use inference::{infer_obstacle, InferenceConfig, InferredObstacle};

use serde::{Deserialize, Serialize};

use crate::numerics::Vec2;
use crate::potential_field::{Attractor, FieldParams, Obstacle};
use crate::{Error, Result};

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Agent {
    #[default]
    Agent1,
    Agent2,
}

impl Agent {
    pub const BOTH: [Agent; 2] = [Agent::Agent1, Agent::Agent2];

    pub fn index(self) -> usize {
        match self {
            Agent::Agent1 => 0,
            Agent::Agent2 => 1,
        }
    }

    pub fn other(self) -> Agent {
        match self {
            Agent::Agent1 => Agent::Agent2,
            Agent::Agent2 => Agent::Agent1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryMode {
    /// Every obstacle has this radius and both agents know it.
    KnownRadius { radius: f64 },
    /// Radii are uniform in `[r_min, r_max]`; inference assumes the midpoint.
    UnknownRadius { r_min: f64, r_max: f64 },
}

impl GeometryMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GeometryMode::KnownRadius { radius } if radius.is_finite() && radius > 0.0 => Ok(()),
            GeometryMode::UnknownRadius { r_min, r_max }
                if r_min.is_finite() && r_max.is_finite() && 0.0 < r_min && r_min <= r_max =>
            {
                Ok(())
            }
            other => Err(Error::Argument(format!("invalid geometry mode {other:?}"))),
        }
    }

    /// Radius a listener assigns to an inferred obstacle.
    pub fn nominal_radius(&self) -> f64 {
        match *self {
            GeometryMode::KnownRadius { radius } => radius,
            GeometryMode::UnknownRadius { r_min, r_max } => 0.5 * (r_min + r_max),
        }
    }

    pub fn max_radius(&self) -> f64 {
        match *self {
            GeometryMode::KnownRadius { radius } => radius,
            GeometryMode::UnknownRadius { r_max, .. } => r_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvObstacle {
    pub center: Vec2,
    pub radius: f64,
    pub owner: Agent,
}

impl EnvObstacle {
    pub fn obstacle(&self) -> Obstacle {
        Obstacle {
            center: self.center,
            radius: self.radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    pub start: Vec2,
    pub goal: Vec2,
    /// Distance from the table center to each carrying agent.
    pub half_length: f64,
    pub geometry: GeometryMode,
    pub obstacles: Vec<EnvObstacle>,
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if !self.start.is_finite() || !self.goal.is_finite() {
            return Err(Error::Argument("start and goal must be finite".into()));
        }
        if self.start.distance(self.goal) <= 0.0 {
            return Err(Error::Argument("start and goal must differ".into()));
        }
        if !(self.half_length.is_finite() && self.half_length > 0.0) {
            return Err(Error::Argument("half_length must be > 0".into()));
        }
        for o in &self.obstacles {
            o.obstacle().validate()?;
        }
        let initial = self.initial_state();
        if let Some(i) = table_collides(&initial, self.obstacles.iter().map(|o| o.obstacle())) {
            return Err(Error::Argument(format!(
                "obstacle {i} overlaps the table at start"
            )));
        }
        Ok(())
    }

    /// Table centered on `start`, axis perpendicular to the direction of travel,
    /// with agent 1 on the left.
    pub fn initial_state(&self) -> TableState {
        let d = self.goal - self.start;
        TableState::new(
            self.start,
            d.y.atan2(d.x) + std::f64::consts::FRAC_PI_2,
            self.half_length,
        )
    }

    /// Goal point each agent is attracted to.
    pub fn attractors(&self, mode: AttractorMode) -> [Attractor; 2] {
        match mode {
            AttractorMode::SharedGoal => [Attractor::new(self.goal); 2],
            AttractorMode::ArmOffset => {
                let (q1, q2) = self.initial_state().endpoints();
                [
                    Attractor::new(self.goal + (q1 - self.start)),
                    Attractor::new(self.goal + (q2 - self.start)),
                ]
            }
        }
    }

    pub fn owned_by(&self, agent: Agent) -> impl Iterator<Item = (usize, &EnvObstacle)> {
        self.obstacles
            .iter()
            .enumerate()
            .filter(move |(_, o)| o.owner == agent)
    }

    /// Stable content hash, used to check that paired conditions share environments.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_vec(self).expect("environment serializes");
        hex::encode(Sha256::digest(&json))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttractorMode {
    /// Both agents are attracted to the goal point itself.
    #[default]
    SharedGoal,
    /// Each agent is attracted to the goal shifted by its starting arm, which
    /// also pulls the table back to its initial heading.
    ArmOffset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StaticAllocation {
    /// Agent 1 always speaks, agent 2 always listens.
    SpeakerListener,
    SpeakerSpeaker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Protocol {
    /// Both agents see every obstacle.
    Centralized,
    /// Each agent sends its closest observed obstacle every `period` steps.
    /// Periods 0 and 1 both mean every step.
    Explicit {
        period: u32,
    },
    /// Roles swap every `period` steps.
    DynamicRoles {
        period: u32,
        #[serde(default)]
        initial_speaker: Agent,
    },
    StaticRoles {
        allocation: StaticAllocation,
    },
}

impl Protocol {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Protocol::DynamicRoles { period: 0, .. } => {
                Err(Error::Argument("dynamic roles need period >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match *self {
            Protocol::Centralized => "centralized".into(),
            Protocol::Explicit { period } => format!("explicit_T{period}"),
            Protocol::DynamicRoles { period, .. } => format!("dynamic_T{period}"),
            Protocol::StaticRoles {
                allocation: StaticAllocation::SpeakerListener,
            } => "speaker_listener".into(),
            Protocol::StaticRoles {
                allocation: StaticAllocation::SpeakerSpeaker,
            } => "speaker_speaker".into(),
        }
    }

    pub fn period(&self) -> Option<u32> {
        match *self {
            Protocol::Explicit { period } | Protocol::DynamicRoles { period, .. } => Some(period),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommStrategy {
    pub protocol: Protocol,
    /// Coefficient of variation of the Gaussian noise on observed actions and
    /// message fields.
    #[serde(default)]
    pub noise_cv: f64,
}

impl CommStrategy {
    pub fn new(protocol: Protocol, noise_cv: f64) -> Self {
        CommStrategy { protocol, noise_cv }
    }

    pub fn validate(&self) -> Result<()> {
        self.protocol.validate()?;
        if !(self.noise_cv.is_finite() && self.noise_cv >= 0.0) {
            return Err(Error::Argument(format!(
                "noise_cv must be >= 0, got {}",
                self.noise_cv
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    pub max_steps: u32,
    /// Success radius around the goal for the table center.
    pub goal_eps: f64,
    pub dt: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_steps: 200,
            goal_eps: 1.0,
            dt: 1.0,
        }
    }
}

impl Limits {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::Argument("max_steps must be >= 1".into()));
        }
        if !(self.goal_eps.is_finite() && self.goal_eps > 0.0) {
            return Err(Error::Argument("goal_eps must be > 0".into()));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Argument("dt must be > 0".into()));
        }
        Ok(())
    }
}

/// Everything a game needs besides the environment, strategy and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimParams {
    pub field: FieldParams,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub inference: InferenceConfig,
    #[serde(default)]
    pub attractors: AttractorMode,
    /// Let a speaker steer around its own inferred obstacle. Off by default:
    /// speakers act on their own observations only.
    #[serde(default)]
    pub speaker_uses_inferred: bool,
}

impl Default for SimParams {
    /// The reference parameter set used for the committed benchmark configs.
    fn default() -> Self {
        SimParams {
            field: FieldParams {
                w_att: 1.0,
                w_rep: 4.0,
                w_v: 0.35,
                rho0: 3.0,
                v_max: 0.6,
            },
            limits: Limits {
                max_steps: 350,
                ..Limits::default()
            },
            inference: InferenceConfig::default(),
            attractors: AttractorMode::default(),
            speaker_uses_inferred: false,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        self.limits.validate()?;
        self.inference.validate()
    }
}
