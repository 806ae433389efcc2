use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::json;

use rolecomms::linear_roles::{
    expected_kl, optimal_variances, rotation_converges, stability_report, NaiveMap, RoleAllocation,
    StateTrajectory, TeamLinearSystem, VariancePair,
};

use crate::{AnalyzeArgs, AnalyzeMode};

fn default_allocation() -> RoleAllocation {
    RoleAllocation::SpeakerListener { speaker: 0 }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    system: TeamLinearSystem,
    #[serde(default = "default_allocation")]
    allocation: RoleAllocation,
    rotation: Option<RotationSpec>,
    variances: Option<VarianceSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RotationSpec {
    state: StateTrajectory,
    horizon: f64,
    dts: Vec<f64>,
    /// Naive-action scales `g_i(a) = scale_i * a`; identity when absent.
    naive_scales: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarianceSpec {
    w1_sq: f64,
    w2_sq: f64,
    #[serde(default)]
    speaker: usize,
    partner_state_var: f64,
    /// Evaluate the KL at these variances instead of the optimum.
    sigma_sq: Option<[f64; 2]>,
}

pub fn run(args: &AnalyzeArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.system)
        .with_context(|| format!("reading {}", args.system.display()))?;
    let file: SystemFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.system.display()))?;
    file.system.validate()?;
    let sys = &file.system;
    let out = match args.mode {
        AnalyzeMode::Stability => {
            file.allocation.validate(sys.agents())?;
            let r = stability_report(sys, file.allocation)?;
            json!({
                "mode": "stability",
                "allocation": file.allocation,
                "eigenvalues": r.eigenvalues.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "max_real_part": r.max_real_part,
                "stable": r.stable,
            })
        }
        AnalyzeMode::Rotation => {
            let rot = file
                .rotation
                .as_ref()
                .context("system file has no `rotation` section")?;
            rot.state.validate()?;
            if rot.state.agents() != sys.agents() {
                bail!(
                    "rotation state has {} agents, system has {}",
                    rot.state.agents(),
                    sys.agents()
                );
            }
            let naive = match &rot.naive_scales {
                Some(s) => NaiveMap::new(s.clone())?,
                None => NaiveMap::identity(sys.agents()),
            };
            let rows = rotation_converges(
                &sys.k_star,
                &naive,
                &|t| rot.state.at(t),
                rot.horizon,
                &rot.dts,
            )?;
            json!({ "mode": "rotation", "rows": rows })
        }
        AnalyzeMode::Variances | AnalyzeMode::Kl => {
            let v = file
                .variances
                .as_ref()
                .context("system file has no `variances` section")?;
            let opt = optimal_variances(&sys.k_star, v.w1_sq, v.w2_sq, v.speaker)?;
            if args.mode == AnalyzeMode::Variances {
                json!({ "mode": "variances", "speaker": v.speaker, "optimal": opt })
            } else {
                let at = v.sigma_sq.map_or(opt, |[a, b]| VariancePair {
                    sigma1_sq: a,
                    sigma2_sq: b,
                });
                let kl = expected_kl(
                    &sys.k_star,
                    at,
                    v.w1_sq,
                    v.w2_sq,
                    v.partner_state_var,
                    v.speaker,
                )?;
                json!({ "mode": "kl", "speaker": v.speaker, "variances": at, "expected_kl": kl })
            }
        }
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}
