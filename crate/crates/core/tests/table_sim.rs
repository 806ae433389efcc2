use std::path::PathBuf;

use proptest::prelude::*;
use rolecomms::bench::RunConfig;
use rolecomms::numerics::Vec2;
use rolecomms::potential_field::Obstacle;
use rolecomms::table_sim::{
    generate_environment, run_game, run_game_with_trajectory, write_trajectory_csv, Agent,
    AgentBelief, CommStrategy, Environment, FailureKind, GeometryMode, KnownObstacle, Protocol,
    SimParams, StaticAllocation, WorkspaceSpec, TRAJECTORY_COLUMNS,
};

const KNOWN: GeometryMode = GeometryMode::KnownRadius { radius: 1.0 };

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn committed_params() -> SimParams {
    let text = std::fs::read_to_string(configs_dir().join("role_ordering.json")).unwrap();
    RunConfig::from_json(&text).unwrap().sim
}

fn all_protocols() -> Vec<Protocol> {
    vec![
        Protocol::Centralized,
        Protocol::Explicit { period: 0 },
        Protocol::Explicit { period: 4 },
        Protocol::DynamicRoles {
            period: 1,
            initial_speaker: Agent::Agent1,
        },
        Protocol::DynamicRoles {
            period: 16,
            initial_speaker: Agent::Agent2,
        },
        Protocol::StaticRoles {
            allocation: StaticAllocation::SpeakerListener,
        },
        Protocol::StaticRoles {
            allocation: StaticAllocation::SpeakerSpeaker,
        },
    ]
}

#[test]
fn empty_course_is_a_straight_run_for_every_protocol() {
    let params = committed_params();
    let env = generate_environment(0, 0, KNOWN, &WorkspaceSpec::default()).unwrap();
    let mut steps = None;
    for protocol in all_protocols() {
        let strategy = CommStrategy::new(protocol, 0.0);
        let out = run_game_with_trajectory(&env, &strategy, &params, 7).unwrap();
        assert!(out.success, "{protocol:?}");
        assert_eq!(out.failure_kind, FailureKind::None);
        assert_eq!(*steps.get_or_insert(out.steps), out.steps, "{protocol:?}");
        let initial = env.initial_state();
        for r in out.trajectory.unwrap() {
            assert_eq!(r.theta, initial.heading);
            assert_eq!(r.cy, initial.center.y);
            assert!(r.inferred1_x.is_none() && r.inferred2_x.is_none());
        }
    }
}

#[test]
fn games_are_deterministic() {
    let params = committed_params();
    let ws = WorkspaceSpec::default();
    for seed in 0..10 {
        let env = generate_environment(seed, 6, KNOWN, &ws).unwrap();
        for protocol in all_protocols() {
            let strategy = CommStrategy::new(protocol, 0.05);
            let a = run_game_with_trajectory(&env, &strategy, &params, seed).unwrap();
            let b = run_game_with_trajectory(&env, &strategy, &params, seed).unwrap();
            assert_eq!(a, b);
            let plain = run_game(&env, &strategy, &params, seed).unwrap();
            assert_eq!((plain.success, plain.steps), (a.success, a.steps));
        }
    }
}

#[test]
fn single_obstacle_scenario() {
    let text = std::fs::read_to_string(configs_dir().join("single_obstacle_env.json")).unwrap();
    let env: Environment = serde_json::from_str(&text).unwrap();
    env.validate().unwrap();
    let params = committed_params();
    let play = |protocol| run_game(&env, &CommStrategy::new(protocol, 0.0), &params, 0).unwrap();

    let centralized = play(Protocol::Centralized);
    assert!(centralized.success);
    // Agent 2 cannot see the obstacle and drags the table into it.
    let blind = play(Protocol::StaticRoles {
        allocation: StaticAllocation::SpeakerSpeaker,
    });
    assert_eq!(blind.failure_kind, FailureKind::Collision);
    // Agent 1 owns the obstacle; as a speaker its motion reveals it.
    let informed = play(Protocol::StaticRoles {
        allocation: StaticAllocation::SpeakerListener,
    });
    assert!(informed.success);
    let fast = play(Protocol::DynamicRoles {
        period: 1,
        initial_speaker: Agent::Agent1,
    });
    assert!(fast.success);
    assert_eq!(fast.steps, centralized.steps);
}

#[test]
fn explicit_every_step_matches_centralized_outcomes() {
    let params = committed_params();
    let ws = WorkspaceSpec::default();
    for seed in 0..100 {
        let env = generate_environment(seed, 2, KNOWN, &ws).unwrap();
        let c = run_game(
            &env,
            &CommStrategy::new(Protocol::Centralized, 0.0),
            &params,
            seed,
        )
        .unwrap();
        let e = run_game(
            &env,
            &CommStrategy::new(Protocol::Explicit { period: 0 }, 0.0),
            &params,
            seed,
        )
        .unwrap();
        assert_eq!(
            (c.success, c.failure_kind),
            (e.success, e.failure_kind),
            "seed {seed}"
        );
        assert!(c.steps.abs_diff(e.steps) <= 1, "seed {seed}");
    }
}

#[test]
fn trajectory_csv_layout() {
    let params = committed_params();
    let env = generate_environment(3, 4, KNOWN, &WorkspaceSpec::default()).unwrap();
    let strategy = CommStrategy::new(
        Protocol::DynamicRoles {
            period: 4,
            initial_speaker: Agent::Agent1,
        },
        0.0,
    );
    let out = run_game_with_trajectory(&env, &strategy, &params, 3).unwrap();
    let records = out.trajectory.unwrap();
    assert_eq!(records.len(), out.steps as usize + 1);
    let mut buf = Vec::new();
    write_trajectory_csv(&records, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "step,cx,cy,theta,v1x,v1y,v2x,v2y,role1,role2,\
         inferred1_x,inferred1_y,inferred1_r,inferred2_x,inferred2_y,inferred2_r"
    );
    assert_eq!(TRAJECTORY_COLUMNS.len(), 16);
    assert_eq!(lines.count(), records.len());
    let first = text.lines().nth(1).unwrap();
    assert!(first.starts_with("0,"));

    let mut empty = Vec::new();
    write_trajectory_csv(&[], &mut empty).unwrap();
    assert_eq!(String::from_utf8(empty).unwrap().lines().count(), 1);
}

fn known(id: usize, x: f64, y: f64) -> KnownObstacle {
    KnownObstacle {
        id,
        obstacle: Obstacle::new(Vec2::new(x, y), 1.0).unwrap(),
    }
}

proptest! {
    #[test]
    fn received_obstacles_accumulate(msgs in prop::collection::vec((0usize..8, -10.0..10.0f64, -10.0..10.0f64), 0..40)) {
        let mut belief = AgentBelief::new(vec![known(100, 0.0, 0.0)]);
        let mut before = belief.known_ids();
        for (id, x, y) in msgs {
            belief.receive(known(id, x, y));
            let after = belief.known_ids();
            prop_assert!(before.iter().all(|i| after.contains(i)));
            prop_assert!(after.contains(&id));
            let latest = belief.received.iter().find(|k| k.id == id).unwrap();
            prop_assert_eq!(latest.obstacle.center, Vec2::new(x, y));
            before = after;
        }
    }
}
