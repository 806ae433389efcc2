//! Role allocations for teams under linear state feedback `a = -K s`.
//!
//! Each agent `i` owns state component `s_i` and action `a_i`. A speaker acts
//! on its own component only; a listener recovers the speaker's component from
//! the speaker's action and applies the centralized gain.

mod allocation;
mod lqr;
mod noise;
mod rotation;
mod variances;

use serde::{Deserialize, Serialize};

use crate::numerics::SmallMatrix;
use crate::{Error, Result};

pub use allocation::{role_gain, stability_report, StabilityReport, STABILITY_EIG_TOL};
pub use lqr::{care_residual, controllability_rank, lqr_gain, LQR_RESIDUAL_TOL};
pub use noise::{alternating_noisy_action, noisy_listener_action, noisy_rotation_action};
pub use rotation::{
    centralized_action, rotation_action, rotation_converges, ConvergenceRow, NaiveMap,
    StateTrajectory,
};
pub use variances::{expected_kl, optimal_variances, VariancePair};

/// Plant `s' = A s + B a`, centralized gain `K*` and per-agent noise variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TeamLinearSystem {
    pub a: SmallMatrix,
    pub b: SmallMatrix,
    pub k_star: SmallMatrix,
    #[serde(default)]
    pub noise_variances: Vec<f64>,
}

impl TeamLinearSystem {
    pub fn new(
        a: SmallMatrix,
        b: SmallMatrix,
        k_star: SmallMatrix,
        noise_variances: Vec<f64>,
    ) -> Result<Self> {
        let sys = TeamLinearSystem {
            a,
            b,
            k_star,
            noise_variances,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.a.rows();
        for (name, m) in [("A", &self.a), ("B", &self.b), ("K*", &self.k_star)] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_finite() {
                return Err(Error::Argument(format!("{name} has non-finite entries")));
            }
        }
        if !self.noise_variances.is_empty() && self.noise_variances.len() != n {
            return Err(Error::Dimension(format!(
                "{} noise variances for {n} agents",
                self.noise_variances.len()
            )));
        }
        if self.noise_variances.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::Argument("noise variances must be >= 0".into()));
        }
        Ok(())
    }

    /// Number of agents (one scalar state per agent).
    pub fn agents(&self) -> usize {
        self.a.rows()
    }

    /// The fixed-role counterexample: `A = [[1,1],[0,1]]`, `B = [[0,0],[1,0]]`.
    pub fn speaker_listener_counterexample(k_star: SmallMatrix) -> Result<Self> {
        TeamLinearSystem::new(
            SmallMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]])?,
            SmallMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]])?,
            k_star,
            vec![],
        )
    }
}

/// Who speaks and who listens (agents are 0-indexed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RoleAllocation {
    /// Every agent acts on its own state only.
    SpeakerSpeaker,
    /// `speaker` acts on its own state; everyone else listens to it.
    SpeakerListener { speaker: usize },
    /// Roles rotate every `period` time units.
    DynamicAlternating { period: f64 },
}

impl RoleAllocation {
    pub fn validate(&self, agents: usize) -> Result<()> {
        match *self {
            RoleAllocation::SpeakerListener { speaker } if speaker >= agents => Err(
                Error::Argument(format!("speaker {speaker} outside a team of {agents}")),
            ),
            RoleAllocation::DynamicAlternating { period } if !(period > 0.0) => Err(
                Error::Argument(format!("alternation period must be > 0, got {period}")),
            ),
            _ => Ok(()),
        }
    }
}
