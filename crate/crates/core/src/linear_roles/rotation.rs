use serde::{Deserialize, Serialize};

use crate::numerics::SmallMatrix;
use crate::{Error, Result};

/// Invertible per-agent map from a naive action to the state it reveals,
/// `g_i(a) = scale_i * a`.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveMap {
    scales: Vec<f64>,
}

impl NaiveMap {
    pub fn identity(agents: usize) -> Self {
        NaiveMap {
            scales: vec![1.0; agents],
        }
    }

    pub fn new(scales: Vec<f64>) -> Result<Self> {
        if scales.iter().any(|g| *g == 0.0 || !g.is_finite()) {
            return Err(Error::Argument(
                "naive map scales must be finite and nonzero".into(),
            ));
        }
        Ok(NaiveMap { scales })
    }

    /// The map under which each speaker's naive action is `-K*_ii s_i`.
    pub fn from_diagonal_gain(k_star: &SmallMatrix) -> Result<Self> {
        let scales = (0..k_star.rows())
            .map(|i| {
                let k = k_star[(i, i)];
                if k == 0.0 {
                    Err(Error::Singular(format!("K*[{i}][{i}] is zero")))
                } else {
                    Ok(-1.0 / k)
                }
            })
            .collect::<Result<_>>()?;
        Ok(NaiveMap { scales })
    }

    pub fn agents(&self) -> usize {
        self.scales.len()
    }

    /// State revealed by naive action `a` of agent `i`.
    pub fn reveal(&self, i: usize, a: f64) -> f64 {
        self.scales[i] * a
    }

    /// Naive actions `a_i` with `g_i(a_i) = s_i`.
    pub fn naive_actions(&self, s: &[f64]) -> Vec<f64> {
        s.iter().zip(&self.scales).map(|(s, g)| s / g).collect()
    }
}

/// `a* = -K* s`.
pub fn centralized_action(k_star: &SmallMatrix, s: &[f64]) -> Result<Vec<f64>> {
    Ok(k_star.mul_vec(s)?.into_iter().map(|v| -v).collect())
}

/// Listener of rotation phase `phase` in a team of `n`.
///
/// Phase `p` is led by agent `p` speaking first, so the listener is agent
/// `(p + 1) mod n`; over `n` consecutive phases every agent listens once.
pub(crate) fn listener_of(phase: usize, n: usize) -> usize {
    (phase + 1) % n
}

/// Team action in one phase of the role rotation.
///
/// Every speaker emits its naive action; the single listener `j` emits
/// `a*_j + (N - 1)(a*_j - naive_j)` so that the mean over a full cycle of
/// `N` phases is exactly `a*`.
pub fn rotation_action(
    k_star: &SmallMatrix,
    s: &[f64],
    phase: usize,
    naive_actions: &[f64],
) -> Result<Vec<f64>> {
    let n = s.len();
    if n < 2 || naive_actions.len() != n || k_star.rows() != n {
        return Err(Error::Dimension(format!(
            "rotation needs N >= 2 agents with matching state ({n}), naive ({}) and gain ({})",
            naive_actions.len(),
            k_star.rows()
        )));
    }
    let a_star = centralized_action(k_star, s)?;
    let listener = listener_of(phase % n, n);
    let overshoot = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == listener {
                a_star[i] + overshoot * (a_star[i] - naive_actions[i])
            } else {
                naive_actions[i]
            }
        })
        .collect())
}

/// Per-agent state as a function of time, for convergence studies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateTrajectory {
    Constant {
        s: Vec<f64>,
    },
    /// `s0 + rate * t`.
    Linear {
        s0: Vec<f64>,
        rate: Vec<f64>,
    },
    /// `offset + amplitude * sin(frequency * t)`.
    Sinusoid {
        offset: Vec<f64>,
        amplitude: Vec<f64>,
        frequency: Vec<f64>,
    },
}

impl StateTrajectory {
    pub fn agents(&self) -> usize {
        match self {
            StateTrajectory::Constant { s } => s.len(),
            StateTrajectory::Linear { s0, .. } => s0.len(),
            StateTrajectory::Sinusoid { offset, .. } => offset.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.agents();
        let ok = match self {
            StateTrajectory::Constant { .. } => true,
            StateTrajectory::Linear { rate, .. } => rate.len() == n,
            StateTrajectory::Sinusoid {
                amplitude,
                frequency,
                ..
            } => amplitude.len() == n && frequency.len() == n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension(
                "state trajectory components differ in length".into(),
            ))
        }
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        match self {
            StateTrajectory::Constant { s } => s.clone(),
            StateTrajectory::Linear { s0, rate } => {
                s0.iter().zip(rate).map(|(a, r)| a + r * t).collect()
            }
            StateTrajectory::Sinusoid {
                offset,
                amplitude,
                frequency,
            } => offset
                .iter()
                .zip(amplitude)
                .zip(frequency)
                .map(|((o, a), f)| o + a * (f * t).sin())
                .collect(),
        }
    }
}

/// One row of the role-rotation convergence table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub dt: f64,
    /// Whole rotation cycles simulated inside the horizon.
    pub cycles: usize,
    /// Sup-norm gap between each cycle's mean action and `a*` at cycle start.
    pub max_deviation: f64,
}

/// Rotation error as the alternation interval shrinks.
///
/// For each `dt`, the horizon is cut into whole cycles of `N` phases (a
/// trailing partial cycle is dropped). Phase `p` of a cycle starting at `t`
/// is evaluated at `t + p dt` on the state trajectory `state_at`, using the
/// naive actions from `naive`. The cycle mean is compared with `a*(t)`.
pub fn rotation_converges(
    k_star: &SmallMatrix,
    naive: &NaiveMap,
    state_at: &dyn Fn(f64) -> Vec<f64>,
    horizon: f64,
    dts: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    let n = k_star.rows();
    if naive.agents() != n {
        return Err(Error::Dimension(
            "naive map does not match team size".into(),
        ));
    }
    if !(horizon > 0.0) {
        return Err(Error::Argument(format!(
            "horizon must be > 0, got {horizon}"
        )));
    }
    if dts.is_empty() || dts.iter().any(|dt| !(*dt > 0.0)) {
        return Err(Error::Argument("dt values must be positive".into()));
    }
    if dts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Argument(
            "dt values must be strictly decreasing".into(),
        ));
    }
    dts.iter()
        .map(|&dt| {
            let cycle = n as f64 * dt;
            let cycles = (horizon / cycle).floor() as usize;
            let mut max_deviation = 0.0_f64;
            for c in 0..cycles {
                let t0 = c as f64 * cycle;
                let mut mean = vec![0.0; n];
                for p in 0..n {
                    let s = state_at(t0 + p as f64 * dt);
                    let a = rotation_action(k_star, &s, p, &naive.naive_actions(&s))?;
                    mean.iter_mut().zip(a).for_each(|(m, v)| *m += v / n as f64);
                }
                let target = centralized_action(k_star, &state_at(t0))?;
                let dev = mean
                    .iter()
                    .zip(&target)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                max_deviation = max_deviation.max(dev);
            }
            Ok(ConvergenceRow {
                dt,
                cycles,
                max_deviation,
            })
        })
        .collect()
}
