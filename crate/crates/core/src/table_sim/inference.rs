use serde::{Deserialize, Serialize};

use crate::numerics::{bisect, Vec2};
use crate::potential_field::{total_attraction, Attractor, FieldParams, Obstacle, RHO_MIN};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferenceConfig {
    /// Residuals shorter than this are read as "no obstacle nearby".
    pub eps_res: f64,
    /// Bisection tolerance on the boundary distance.
    pub tol: f64,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        InferenceConfig {
            eps_res: 1e-9,
            tol: 1e-10,
        }
    }
}

impl InferenceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_res.is_finite() && self.eps_res > 0.0) {
            return Err(Error::Argument("eps_res must be > 0".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Argument("inference tol must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InferredObstacle {
    pub obstacle: Obstacle,
    /// Boundary distance from the partner to the inferred obstacle.
    pub rho: f64,
    /// The residual exceeded the field at `RHO_MIN`, so `rho` was pinned there.
    pub saturated: bool,
}

/// Explain a partner's velocity with a single obstacle.
///
/// The residual left after removing the shared attractive field is taken as
/// the partner's repulsive push. Its length fixes the boundary distance (the
/// repulsive magnitude is monotone in it, solved by bisection) and its
/// direction points from the obstacle to the partner.
pub fn infer_obstacle(
    observed_partner_velocity: Vec2,
    partner_pos: Vec2,
    attractors: &[Attractor],
    params: &FieldParams,
    nominal_radius: f64,
    config: &InferenceConfig,
) -> Result<Option<InferredObstacle>> {
    let residual =
        observed_partner_velocity / params.w_v + total_attraction(partner_pos, attractors, params);
    let magnitude = residual.norm();
    if !magnitude.is_finite() {
        return Err(Error::Numeric("non-finite inference residual".into()));
    }
    if magnitude < config.eps_res {
        return Ok(None);
    }
    let dir = residual / magnitude;
    let (rho, saturated) = if magnitude >= params.repulsion_magnitude(RHO_MIN) {
        (RHO_MIN, true)
    } else {
        let f = |rho: f64| params.repulsion_magnitude(rho) - magnitude;
        (bisect(f, RHO_MIN, params.rho0, config.tol)?, false)
    };
    Ok(Some(InferredObstacle {
        obstacle: Obstacle {
            center: partner_pos - dir * (rho + nominal_radius),
            radius: nominal_radius,
        },
        rho,
        saturated,
    }))
}
