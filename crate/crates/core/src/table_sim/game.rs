use std::io::Write;

use serde::{Deserialize, Serialize};

use super::comms::{build_message, corrupt, AgentBelief, KnownObstacle};
use super::dynamics::{table_collides, table_step, TableState};
use super::inference::infer_obstacle;
use super::{Agent, CommStrategy, Environment, Protocol, SimParams, StaticAllocation};
use crate::numerics::{Rng, Vec2};
use crate::potential_field::{agent_velocity, Obstacle};
use crate::{Error, Result};

/// Stream id for observation and message noise.
pub(crate) const NOISE_STREAM: u64 = 2 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    None,
    Collision,
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Speaker,
    Listener,
    /// No role: explicit or centralized teams.
    Peer,
}

/// One row of a trajectory: the table after `step` steps, the velocities
/// that produced it and each agent's inferred obstacle at that point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub step: u32,
    pub cx: f64,
    pub cy: f64,
    pub theta: f64,
    pub v1x: f64,
    pub v1y: f64,
    pub v2x: f64,
    pub v2y: f64,
    pub role1: Role,
    pub role2: Role,
    pub inferred1_x: Option<f64>,
    pub inferred1_y: Option<f64>,
    pub inferred1_r: Option<f64>,
    pub inferred2_x: Option<f64>,
    pub inferred2_y: Option<f64>,
    pub inferred2_r: Option<f64>,
}

/// Column order of the trajectory CSV.
pub const TRAJECTORY_COLUMNS: [&str; 16] = [
    "step",
    "cx",
    "cy",
    "theta",
    "v1x",
    "v1y",
    "v2x",
    "v2y",
    "role1",
    "role2",
    "inferred1_x",
    "inferred1_y",
    "inferred1_r",
    "inferred2_x",
    "inferred2_y",
    "inferred2_r",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimOutcome {
    pub success: bool,
    pub steps: u32,
    pub failure_kind: FailureKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<TrajectoryRecord>>,
}

/// Play one game. Deterministic in all of its arguments.
pub fn run_game(
    env: &Environment,
    strategy: &CommStrategy,
    params: &SimParams,
    seed: u64,
) -> Result<SimOutcome> {
    play(env, strategy, params, seed, false)
}

/// [`run_game`] that also records one [`TrajectoryRecord`] per step.
pub fn run_game_with_trajectory(
    env: &Environment,
    strategy: &CommStrategy,
    params: &SimParams,
    seed: u64,
) -> Result<SimOutcome> {
    play(env, strategy, params, seed, true)
}

pub fn write_trajectory_csv<W: Write>(records: &[TrajectoryRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(TRAJECTORY_COLUMNS).map_err(csv_error)?;
    }
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn roles_at(protocol: &Protocol, step: u32) -> [Role; 2] {
    match *protocol {
        Protocol::Centralized | Protocol::Explicit { .. } => [Role::Peer, Role::Peer],
        Protocol::StaticRoles {
            allocation: StaticAllocation::SpeakerSpeaker,
        } => [Role::Speaker, Role::Speaker],
        Protocol::StaticRoles {
            allocation: StaticAllocation::SpeakerListener,
        } => [Role::Speaker, Role::Listener],
        Protocol::DynamicRoles {
            period,
            initial_speaker,
        } => {
            let speaker = if (step / period).is_multiple_of(2) {
                initial_speaker
            } else {
                initial_speaker.other()
            };
            let mut roles = [Role::Listener; 2];
            roles[speaker.index()] = Role::Speaker;
            roles
        }
    }
}

fn initial_beliefs(env: &Environment, protocol: &Protocol) -> [AgentBelief; 2] {
    Agent::BOTH.map(|agent| {
        let observed = env
            .obstacles
            .iter()
            .enumerate()
            .filter(|(_, o)| *protocol == Protocol::Centralized || o.owner == agent)
            .map(|(id, o)| KnownObstacle {
                id,
                obstacle: o.obstacle(),
            })
            .collect();
        AgentBelief::new(observed)
    })
}

/// Message as received: center offset from the sender and radius, each
/// corrupted, then re-anchored at the sender's true position.
fn deliver(msg: KnownObstacle, sender_pos: Vec2, cv: f64, rng: &mut Rng) -> Result<KnownObstacle> {
    let offset = msg.obstacle.center - sender_pos;
    let noisy = corrupt(&[offset.x, offset.y, msg.obstacle.radius], cv, rng)?;
    Ok(KnownObstacle {
        id: msg.id,
        obstacle: Obstacle {
            center: sender_pos + Vec2::new(noisy[0], noisy[1]),
            radius: noisy[2].max(0.0),
        },
    })
}

fn play(
    env: &Environment,
    strategy: &CommStrategy,
    params: &SimParams,
    seed: u64,
    record: bool,
) -> Result<SimOutcome> {
    env.validate()?;
    strategy.validate()?;
    params.validate()?;
    let field = &params.field;
    let limits = &params.limits;
    let protocol = &strategy.protocol;
    let cv = strategy.noise_cv;
    let mut rng = Rng::with_stream(seed, NOISE_STREAM);
    let attractors = env.attractors(params.attractors);
    let nominal_radius = env.geometry.nominal_radius();
    let obstacles: Vec<Obstacle> = env.obstacles.iter().map(|o| o.obstacle()).collect();

    let mut beliefs = initial_beliefs(env, protocol);
    let mut state = env.initial_state();
    let mut trajectory = record.then(|| vec![snapshot(0, &state, [Vec2::ZERO; 2], None, &beliefs)]);

    for step in 0..limits.max_steps {
        let (q1, q2) = state.endpoints();
        let pos = [q1, q2];

        if let Protocol::Explicit { period } = *protocol {
            if step % period.max(1) == 0 {
                let msgs = [0, 1].map(|i| build_message(&beliefs[i], pos[i]));
                for (i, msg) in msgs.into_iter().enumerate() {
                    if let Some(m) = msg {
                        let received = deliver(m, pos[i], cv, &mut rng)?;
                        beliefs[1 - i].receive(received);
                    }
                }
            }
        }

        let roles = roles_at(protocol, step);
        let velocity = |i: usize, belief: &AgentBelief, include_inferred: bool| {
            agent_velocity(
                pos[i],
                &attractors[i..=i],
                belief.field_obstacles(include_inferred),
                field,
            )
        };
        let mut v = [Vec2::ZERO; 2];
        match roles {
            [Role::Speaker, Role::Listener] | [Role::Listener, Role::Speaker] => {
                let s = if roles[0] == Role::Speaker { 0 } else { 1 };
                let l = 1 - s;
                v[s] = velocity(s, &beliefs[s], params.speaker_uses_inferred);
                let seen = corrupt(&[v[s].x, v[s].y], cv, &mut rng)?;
                let inferred = infer_obstacle(
                    Vec2::new(seen[0], seen[1]),
                    pos[s],
                    &attractors[s..=s],
                    field,
                    nominal_radius,
                    &params.inference,
                )?;
                if let Some(inf) = inferred {
                    beliefs[l].inferred = Some(inf.obstacle);
                }
                v[l] = velocity(l, &beliefs[l], true);
            }
            _ => {
                for i in 0..2 {
                    let include = roles[i] != Role::Speaker || params.speaker_uses_inferred;
                    v[i] = velocity(i, &beliefs[i], include);
                }
            }
        }

        state = table_step(&state, v[0], v[1], limits.dt);
        let steps = step + 1;
        if let Some(t) = trajectory.as_mut() {
            t.push(snapshot(steps, &state, v, Some(roles), &beliefs));
        }
        let finish = |success, failure_kind| SimOutcome {
            success,
            steps,
            failure_kind,
            trajectory: None,
        };
        let outcome = if table_collides(&state, obstacles.iter().copied()).is_some() {
            Some(finish(false, FailureKind::Collision))
        } else if state.center.distance(env.goal) <= limits.goal_eps {
            Some(finish(true, FailureKind::None))
        } else if steps == limits.max_steps {
            Some(finish(false, FailureKind::Timeout))
        } else {
            None
        };
        if let Some(mut o) = outcome {
            o.trajectory = trajectory;
            return Ok(o);
        }
    }
    unreachable!("loop always returns on the final step")
}

fn snapshot(
    step: u32,
    state: &TableState,
    v: [Vec2; 2],
    roles: Option<[Role; 2]>,
    beliefs: &[AgentBelief; 2],
) -> TrajectoryRecord {
    let roles = roles.unwrap_or([Role::Peer; 2]);
    let inf = |i: usize| {
        beliefs[i]
            .inferred
            .map(|o| (o.center.x, o.center.y, o.radius))
    };
    let (a, b) = (inf(0), inf(1));
    TrajectoryRecord {
        step,
        cx: state.center.x,
        cy: state.center.y,
        theta: state.heading,
        v1x: v[0].x,
        v1y: v[0].y,
        v2x: v[1].x,
        v2y: v[1].y,
        role1: roles[0],
        role2: roles[1],
        inferred1_x: a.map(|t| t.0),
        inferred1_y: a.map(|t| t.1),
        inferred1_r: a.map(|t| t.2),
        inferred2_x: b.map(|t| t.0),
        inferred2_y: b.map(|t| t.1),
        inferred2_r: b.map(|t| t.2),
    }
}
