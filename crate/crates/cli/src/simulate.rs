use std::fs::File;
use std::io::BufWriter;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde_json::json;

use rolecomms::table_sim::{
    generate_environment, run_game_with_trajectory, write_trajectory_csv, Agent, CommStrategy,
    Environment, GeometryMode, Protocol, SimParams, StaticAllocation, WorkspaceSpec,
};

use crate::config;
use crate::SimulateArgs;

pub fn parse_protocol(s: &str) -> Result<Protocol> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).context("parsing inline protocol JSON");
    }
    let (name, period) = match s.split_once(':') {
        Some((name, p)) => (
            name,
            Some(p.parse::<u32>().context("period must be an integer")?),
        ),
        None => (s, None),
    };
    Ok(match (name, period) {
        ("centralized", None) => Protocol::Centralized,
        ("explicit", Some(period)) => Protocol::Explicit { period },
        ("dynamic", Some(period)) => Protocol::DynamicRoles {
            period,
            initial_speaker: Agent::Agent1,
        },
        ("speaker-listener", None) => Protocol::StaticRoles {
            allocation: StaticAllocation::SpeakerListener,
        },
        ("speaker-speaker", None) => Protocol::StaticRoles {
            allocation: StaticAllocation::SpeakerSpeaker,
        },
        _ => bail!("unknown strategy {s:?}"),
    })
}

pub fn run(args: &SimulateArgs) -> Result<ExitCode> {
    let (sim, workspace) = match &args.config {
        Some(path) => {
            let cfg = config::load(path)?;
            (cfg.sim, cfg.workspace)
        }
        None => (SimParams::default(), WorkspaceSpec::default()),
    };
    let protocol = parse_protocol(&args.strategy)?;
    let strategy = CommStrategy::new(protocol, args.noise_cv);
    strategy.validate()?;

    let (env, env_seed) = match args.env.parse::<u64>() {
        Ok(seed) => {
            let geometry = match &args.radius_range {
                Some(r) => GeometryMode::UnknownRadius {
                    r_min: r[0],
                    r_max: r[1],
                },
                None => GeometryMode::KnownRadius {
                    radius: args.radius,
                },
            };
            (
                generate_environment(seed, args.n, geometry, &workspace)?,
                Some(seed),
            )
        }
        Err(_) => {
            let text = std::fs::read_to_string(&args.env)
                .with_context(|| format!("reading environment {}", args.env))?;
            let env: Environment = serde_json::from_str(&text)
                .with_context(|| format!("parsing environment {}", args.env))?;
            env.validate()?;
            (env, None)
        }
    };
    let seed = args.seed.or(env_seed).unwrap_or(0);
    let outcome = run_game_with_trajectory(&env, &strategy, &sim, seed)?;

    if let Some(path) = &args.trajectory_out {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_trajectory_csv(
            outcome.trajectory.as_deref().unwrap_or(&[]),
            BufWriter::new(f),
        )?;
    }
    if let Some(path) = &args.env_out {
        std::fs::write(path, serde_json::to_string_pretty(&env)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let summary = json!({
        "seed": seed,
        "env_seed": env_seed,
        "strategy": strategy,
        "success": outcome.success,
        "steps": outcome.steps,
        "failure_kind": outcome.failure_kind,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(ExitCode::SUCCESS)
}
