use serde::{Deserialize, Serialize};

use crate::numerics::Vec2;
use crate::potential_field::Obstacle;

/// Rigid table pose. Agent 1 holds `center + r·(cos θ, sin θ)`, agent 2 the
/// opposite end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableState {
    pub center: Vec2,
    pub heading: f64,
    pub half_length: f64,
}

impl TableState {
    pub fn new(center: Vec2, heading: f64, half_length: f64) -> Self {
        TableState {
            center,
            heading,
            half_length,
        }
    }

    /// Unit vector from the center towards agent 1.
    pub fn axis(&self) -> Vec2 {
        Vec2::from_angle(self.heading)
    }

    pub fn endpoints(&self) -> (Vec2, Vec2) {
        let arm = self.axis() * self.half_length;
        (self.center + arm, self.center - arm)
    }
}

/// Advance the table by one step of length `dt`.
///
/// The center moves with the mean of the two agent velocities; the heading
/// turns with the part of agent 1's velocity across the table, divided by
/// the arm length. Agent 2's arm gives the same rate.
pub fn table_step(state: &TableState, v1: Vec2, v2: Vec2, dt: f64) -> TableState {
    debug_assert!(dt > 0.0);
    let vc = (v1 + v2) * 0.5;
    let omega = state.axis().cross(v1 - vc) / state.half_length;
    TableState {
        center: state.center + vc * dt,
        heading: state.heading + omega * dt,
        half_length: state.half_length,
    }
}

/// Euclidean distance from `p` to the segment `ab`.
pub fn segment_point_distance(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Index of the first obstacle whose disc meets the table segment.
pub fn table_collides(
    state: &TableState,
    obstacles: impl IntoIterator<Item = Obstacle>,
) -> Option<usize> {
    let (q1, q2) = state.endpoints();
    obstacles
        .into_iter()
        .position(|o| segment_point_distance(q1, q2, o.center) < o.radius)
}
