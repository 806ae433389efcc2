use serde::{Deserialize, Serialize};

use crate::numerics::SmallMatrix;
use crate::{Error, Result};

/// Action variances of agents 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariancePair {
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
}

fn check_gain(k: &SmallMatrix, speaker: usize) -> Result<()> {
    if k.rows() != 2 || k.cols() != 2 {
        return Err(Error::Dimension("expected a 2x2 gain".into()));
    }
    if speaker > 1 {
        return Err(Error::Argument(format!(
            "speaker must be 0 or 1, got {speaker}"
        )));
    }
    if k[(speaker, speaker)] == 0.0 {
        return Err(Error::Singular(format!(
            "speaker diagonal gain K[{speaker}][{speaker}] is zero"
        )));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

/// Variances minimizing the expected KL gap to a Gaussian centralized policy
/// with variances `(w1_sq, w2_sq)`.
///
/// With agent 0 speaking:
/// `sigma1^2 = K11^2 w1^2 w2^2 / (K11^2 w2^2 + K21^2 w1^2)`, `sigma2^2 = w2^2`.
/// The listener keeps the centralized variance; the speaker is never noisier.
pub fn optimal_variances(
    k: &SmallMatrix,
    w1_sq: f64,
    w2_sq: f64,
    speaker: usize,
) -> Result<VariancePair> {
    check_gain(k, speaker)?;
    positive("w1^2", w1_sq)?;
    positive("w2^2", w2_sq)?;
    let listener = 1 - speaker;
    let w = [w1_sq, w2_sq];
    let kss = k[(speaker, speaker)].powi(2);
    let kls = k[(listener, speaker)].powi(2);
    let speaker_var = kss * w[speaker] * w[listener] / (kss * w[listener] + kls * w[speaker]);
    // Guard against rounding pushing the ratio a hair above w_s^2.
    let speaker_var = speaker_var.min(w[speaker]);
    Ok(if speaker == 0 {
        VariancePair {
            sigma1_sq: speaker_var,
            sigma2_sq: w2_sq,
        }
    } else {
        VariancePair {
            sigma1_sq: w1_sq,
            sigma2_sq: speaker_var,
        }
    })
}

/// Expected KL objective over independent Gaussian state priors.
///
/// With agent 0 speaking and `partner_state_var = sigma_{s2}^2`:
///
/// ```text
/// K12^2 sigma_s2^2 / (2 w1^2) + log(w1 w2 / (sigma1 sigma2))
///   + sigma1^2 / (2 w1^2) + (sigma2^2 + K21^2 sigma1^2 / K11^2) / (2 w2^2)
/// ```
///
/// Speaker 1 is the mirror image with indices swapped; `partner_state_var`
/// is then the prior variance of agent 0's state.
pub fn expected_kl(
    k: &SmallMatrix,
    vars: VariancePair,
    w1_sq: f64,
    w2_sq: f64,
    partner_state_var: f64,
    speaker: usize,
) -> Result<f64> {
    check_gain(k, speaker)?;
    positive("sigma1^2", vars.sigma1_sq)?;
    positive("sigma2^2", vars.sigma2_sq)?;
    positive("w1^2", w1_sq)?;
    positive("w2^2", w2_sq)?;
    positive("partner state variance", partner_state_var)?;
    let l = 1 - speaker;
    let s = speaker;
    let sig = [vars.sigma1_sq, vars.sigma2_sq];
    let w = [w1_sq, w2_sq];
    let prior_term = k[(s, l)].powi(2) * partner_state_var / (2.0 * w[s]);
    let log_term = 0.5 * ((w[0] * w[1]) / (sig[0] * sig[1])).ln();
    let speaker_term = sig[s] / (2.0 * w[s]);
    let listener_term = (sig[l] + k[(l, s)].powi(2) * sig[s] / k[(s, s)].powi(2)) / (2.0 * w[l]);
    Ok(prior_term + log_term + speaker_term + listener_term)
}
