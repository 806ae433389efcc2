use super::rotation::{centralized_action, listener_of, NaiveMap};
use crate::numerics::SmallMatrix;
use crate::{Error, Result};

fn check_two_agent(k_star: &SmallMatrix, s: &[f64], noise: &[f64]) -> Result<()> {
    if k_star.rows() != 2 || k_star.cols() != 2 || s.len() != 2 || noise.len() != 2 {
        return Err(Error::Dimension("expected a two-agent team".into()));
    }
    for i in 0..2 {
        if k_star[(i, i)] == 0.0 {
            return Err(Error::Singular(format!("K*[{i}][{i}] is zero")));
        }
    }
    Ok(())
}

/// Fast-alternation team action when each listener sees its partner's action
/// corrupted by `noise[i]`:
/// `-K* s + [K12/K22 n2, K21/K11 n1]`.
pub fn noisy_listener_action(k_star: &SmallMatrix, s: &[f64], noise: &[f64]) -> Result<Vec<f64>> {
    check_two_agent(k_star, s, noise)?;
    let mut a = centralized_action(k_star, s)?;
    a[0] += k_star[(0, 1)] / k_star[(1, 1)] * noise[1];
    a[1] += k_star[(1, 0)] / k_star[(0, 0)] * noise[0];
    Ok(a)
}

/// One rotation phase where the listener sees every speaker's naive action
/// plus `noise[i]` and acts on the state it decodes from those observations.
pub fn noisy_rotation_action(
    k_star: &SmallMatrix,
    naive: &NaiveMap,
    s: &[f64],
    phase: usize,
    noise: &[f64],
) -> Result<Vec<f64>> {
    let n = s.len();
    if n < 2 || k_star.rows() != n || naive.agents() != n || noise.len() != n {
        return Err(Error::Dimension("team size mismatch".into()));
    }
    let emitted = naive.naive_actions(s);
    let listener = listener_of(phase % n, n);
    let estimate: Vec<f64> = (0..n)
        .map(|i| {
            if i == listener {
                s[i]
            } else {
                naive.reveal(i, emitted[i] + noise[i])
            }
        })
        .collect();
    let target = centralized_action(k_star, &estimate)?[listener];
    let overshoot = (n - 1) as f64;
    let mut a = emitted;
    a[listener] = target + overshoot * (target - a[listener]);
    Ok(a)
}

/// Cycle mean of [`noisy_rotation_action`] for a two-agent team whose
/// speakers emit `-K*_ii s_i`.
pub fn alternating_noisy_action(
    k_star: &SmallMatrix,
    s: &[f64],
    noise: &[f64],
) -> Result<Vec<f64>> {
    check_two_agent(k_star, s, noise)?;
    let naive = NaiveMap::from_diagonal_gain(k_star)?;
    let p0 = noisy_rotation_action(k_star, &naive, s, 0, noise)?;
    let p1 = noisy_rotation_action(k_star, &naive, s, 1, noise)?;
    Ok(vec![0.5 * (p0[0] + p1[0]), 0.5 * (p0[1] + p1[1])])
}
