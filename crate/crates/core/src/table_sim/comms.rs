use serde::{Deserialize, Serialize};

use crate::numerics::{gaussian, Rng, Vec2};
use crate::potential_field::Obstacle;
use crate::Result;

/// An obstacle together with its index in the environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnownObstacle {
    pub id: usize,
    pub obstacle: Obstacle,
}

/// What one agent knows about the obstacles.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AgentBelief {
    pub observed: Vec<KnownObstacle>,
    /// Obstacles delivered by messages, kept sorted by id. A later message
    /// about the same id replaces the earlier estimate.
    pub received: Vec<KnownObstacle>,
    pub inferred: Option<Obstacle>,
}

impl AgentBelief {
    pub fn new(observed: Vec<KnownObstacle>) -> Self {
        AgentBelief {
            observed,
            ..AgentBelief::default()
        }
    }

    pub fn receive(&mut self, msg: KnownObstacle) {
        match self.received.binary_search_by_key(&msg.id, |k| k.id) {
            Ok(i) => self.received[i] = msg,
            Err(i) => self.received.insert(i, msg),
        }
    }

    /// Ids of every obstacle this agent has seen or been told about.
    pub fn known_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self
            .observed
            .iter()
            .chain(&self.received)
            .map(|k| k.id)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Obstacles fed into this agent's potential field.
    pub fn field_obstacles(&self, include_inferred: bool) -> impl Iterator<Item = &Obstacle> {
        let inferred = if include_inferred {
            self.inferred.as_ref()
        } else {
            None
        };
        self.observed
            .iter()
            .chain(&self.received)
            .map(|k| &k.obstacle)
            .chain(inferred)
    }
}

/// The observed obstacle whose center is nearest to `own_pos`; ties go to
/// the earlier entry.
pub fn build_message(belief: &AgentBelief, own_pos: Vec2) -> Option<KnownObstacle> {
    let mut best: Option<(f64, &KnownObstacle)> = None;
    for k in &belief.observed {
        let d = k.obstacle.center.distance(own_pos);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, k));
        }
    }
    best.map(|(_, k)| *k)
}

/// Add zero-mean Gaussian noise with standard deviation `cv·|x|` to each
/// component. Every component consumes the same number of draws whatever
/// its value, so streams stay aligned across noise levels.
pub fn corrupt(values: &[f64], cv: f64, rng: &mut Rng) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&x| gaussian(rng, x, cv * x.abs()))
        .collect()
}
