//! Artificial potential-field planner.
//!
//! Each agent follows the attractive pull of its goal point and the push of
//! every obstacle it knows about. The repulsive gradient returned by
//! [`repulsive_grad`] points away from the obstacle; [`agent_velocity`]
//! descends the attractive potential and follows that push outward.

use serde::{Deserialize, Serialize};

use crate::numerics::Vec2;
use crate::{Error, Result};

/// Floor on the boundary distance used by the repulsive field.
pub const RHO_MIN: f64 = 1e-3;

/// Radius around an attractor inside which its gradient is zero.
pub const EPS_SING: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldParams {
    pub w_att: f64,
    pub w_rep: f64,
    /// Velocity scale.
    pub w_v: f64,
    /// Repulsion range, measured from the obstacle boundary.
    pub rho0: f64,
    /// Speed limit applied after summing the field.
    pub v_max: f64,
}

impl Default for FieldParams {
    fn default() -> Self {
        FieldParams {
            w_att: 1.0,
            w_rep: 1.0,
            w_v: 1.0,
            rho0: 2.0,
            v_max: f64::INFINITY,
        }
    }
}

impl FieldParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("w_att", self.w_att),
            ("w_rep", self.w_rep),
            ("w_v", self.w_v),
            ("rho0", self.rho0),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Argument(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        if !(self.v_max > 0.0) {
            return Err(Error::Argument(format!(
                "v_max must be > 0, got {}",
                self.v_max
            )));
        }
        if self.rho0 <= RHO_MIN {
            return Err(Error::Argument(format!("rho0 must exceed {RHO_MIN}")));
        }
        Ok(())
    }

    /// Repulsive magnitude at boundary distance `rho`, before the floor.
    pub fn repulsion_magnitude(&self, rho: f64) -> f64 {
        if rho > self.rho0 {
            0.0
        } else {
            self.w_rep * (1.0 / rho - 1.0 / self.rho0) / rho
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstacle {
    pub center: Vec2,
    pub radius: f64,
}

impl Obstacle {
    pub fn new(center: Vec2, radius: f64) -> Result<Self> {
        let o = Obstacle { center, radius };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() || !self.radius.is_finite() || self.radius < 0.0 {
            return Err(Error::Argument(format!("invalid obstacle {self:?}")));
        }
        Ok(())
    }

    /// Distance from `q` to the disc boundary, floored at [`RHO_MIN`].
    pub fn boundary_distance(&self, q: Vec2) -> f64 {
        (q.distance(self.center) - self.radius).max(RHO_MIN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Attractor {
    pub location: Vec2,
}

impl Attractor {
    pub fn new(location: Vec2) -> Self {
        Attractor { location }
    }
}

/// `w_att · (q − q_k)/‖q − q_k‖`, zero within [`EPS_SING`] of the attractor.
pub fn attractive_grad(q: Vec2, attractor: Attractor, w_att: f64) -> Vec2 {
    match (q - attractor.location).normalized(EPS_SING) {
        Some(u) => u * w_att,
        None => Vec2::ZERO,
    }
}

/// `w_rep · (1/ρ − 1/ρ0)(1/ρ) · (q − q_j)/‖q − q_j‖` inside the range, else zero.
pub fn repulsive_grad(q: Vec2, obs: &Obstacle, params: &FieldParams) -> Vec2 {
    let rho = obs.boundary_distance(q);
    if rho >= params.rho0 {
        return Vec2::ZERO;
    }
    match (q - obs.center).normalized(EPS_SING) {
        Some(u) => u * params.repulsion_magnitude(rho),
        None => Vec2::ZERO,
    }
}

/// Sum of repulsive gradients, i.e. the outward push felt at `q`.
pub fn total_repulsion<'a>(
    q: Vec2,
    obstacles: impl IntoIterator<Item = &'a Obstacle>,
    params: &FieldParams,
) -> Vec2 {
    obstacles
        .into_iter()
        .map(|o| repulsive_grad(q, o, params))
        .sum()
}

/// Sum of attractive gradients at `q`.
pub fn total_attraction(q: Vec2, attractors: &[Attractor], params: &FieldParams) -> Vec2 {
    attractors
        .iter()
        .map(|a| attractive_grad(q, *a, params.w_att))
        .sum()
}

/// Velocity before the speed clamp.
pub fn raw_velocity<'a>(
    q: Vec2,
    attractors: &[Attractor],
    obstacles: impl IntoIterator<Item = &'a Obstacle>,
    params: &FieldParams,
) -> Vec2 {
    (total_repulsion(q, obstacles, params) - total_attraction(q, attractors, params)) * params.w_v
}

/// `w_v · (−Σ attractive + Σ repulsive)`, clamped to `v_max`.
pub fn agent_velocity<'a>(
    q: Vec2,
    attractors: &[Attractor],
    obstacles: impl IntoIterator<Item = &'a Obstacle>,
    params: &FieldParams,
) -> Vec2 {
    raw_velocity(q, attractors, obstacles, params).clamp_norm(params.v_max)
}
