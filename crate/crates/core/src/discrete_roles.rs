//! Exact speaker and listener policies on finite state and action spaces.
//!
//! Centralized policies are stored from the acting agent's point of view:
//! a [`FinitePolicy`] with shape `[own_states, partner_states]` gives
//! `pi*(a | own, partner)`. A speaker policy has shape `[own_states]`.
//!
//! Histories are handled by enumeration: [`HistoryIndex`] flattens state
//! histories into super-states, and [`lift_to_histories`] turns a
//! current-state policy into one over those super-states.

use crate::{Error, Result};

/// Probabilities must sum to one within this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-9;

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    if p.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::Argument(format!(
            "{what} has a negative or non-finite entry"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Argument(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}

fn normalize(mut p: Vec<f64>) -> Option<Vec<f64>> {
    let total: f64 = p.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    p.iter_mut().for_each(|v| *v /= total);
    Some(p)
}

/// Conditional distribution over actions given a tuple of state indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePolicy {
    shape: Vec<usize>,
    actions: usize,
    table: Vec<f64>,
}

impl FinitePolicy {
    /// `table` is laid out row-major over `shape`, with the action axis last.
    pub fn new(shape: Vec<usize>, actions: usize, table: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) || actions == 0 {
            return Err(Error::Dimension(format!(
                "policy shape {shape:?} with {actions} actions"
            )));
        }
        let rows: usize = shape.iter().product();
        if table.len() != rows * actions {
            return Err(Error::Dimension(format!(
                "table has {} entries, expected {}",
                table.len(),
                rows * actions
            )));
        }
        for (row, p) in table.chunks(actions).enumerate() {
            check_distribution(p, &format!("policy row {row}"))?;
        }
        Ok(FinitePolicy {
            shape,
            actions,
            table,
        })
    }

    /// Builds a policy by evaluating `f(state_tuple)` for every state tuple.
    pub fn from_fn(
        shape: Vec<usize>,
        actions: usize,
        mut f: impl FnMut(&[usize]) -> Vec<f64>,
    ) -> Result<Self> {
        let rows: usize = shape.iter().product();
        let mut table = Vec::with_capacity(rows * actions);
        let mut idx = vec![0; shape.len()];
        for _ in 0..rows {
            let p = f(&idx);
            if p.len() != actions {
                return Err(Error::Dimension(format!(
                    "distribution of length {} for {actions} actions",
                    p.len()
                )));
            }
            table.extend(p);
            for axis in (0..shape.len()).rev() {
                idx[axis] += 1;
                if idx[axis] < shape[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
        FinitePolicy::new(shape, actions, table)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn actions(&self) -> usize {
        self.actions
    }

    fn offset(&self, states: &[usize]) -> Result<usize> {
        if states.len() != self.shape.len() {
            return Err(Error::Dimension(format!(
                "{} state indices for a policy over {} axes",
                states.len(),
                self.shape.len()
            )));
        }
        let mut row = 0;
        for (s, n) in states.iter().zip(&self.shape) {
            if s >= n {
                return Err(Error::Argument(format!("state {s} out of range 0..{n}")));
            }
            row = row * n + s;
        }
        Ok(row * self.actions)
    }

    /// Action distribution for the given state tuple.
    pub fn dist(&self, states: &[usize]) -> Result<&[f64]> {
        let o = self.offset(states)?;
        Ok(&self.table[o..o + self.actions])
    }

    pub fn prob(&self, states: &[usize], action: usize) -> Result<f64> {
        if action >= self.actions {
            return Err(Error::Argument(format!(
                "action {action} out of range 0..{}",
                self.actions
            )));
        }
        Ok(self.dist(states)?[action])
    }

    fn expect_joint(&self) -> Result<(usize, usize)> {
        match self.shape[..] {
            [own, partner] => Ok((own, partner)),
            _ => Err(Error::Dimension(format!(
                "expected a policy over (own, partner) states, got shape {:?}",
                self.shape
            ))),
        }
    }
}

/// Probability vector over the partner's states (or enumerated histories).
#[derive(Debug, Clone, PartialEq)]
pub struct Belief(Vec<f64>);

impl Belief {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Dimension("empty belief".into()));
        }
        check_distribution(&p, "belief")?;
        Ok(Belief(p))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("empty belief".into()));
        }
        Ok(Belief(vec![1.0 / n as f64; n]))
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::Argument(format!("point mass at {at} of {n} states")));
        }
        let mut p = vec![0.0; n];
        p[at] = 1.0;
        Ok(Belief(p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }
}

/// Mixes `pi*(. | own, partner)` over the partner states weighted by `weights`.
fn mixture(centralized: &FinitePolicy, weights: &Belief, own_state: usize) -> Result<Vec<f64>> {
    let (own, partner) = centralized.expect_joint()?;
    if weights.len() != partner {
        return Err(Error::Argument(format!(
            "belief over {} states, policy has {partner} partner states",
            weights.len()
        )));
    }
    if own_state >= own {
        return Err(Error::Argument(format!(
            "own state {own_state} out of range 0..{own}"
        )));
    }
    let mut out = vec![0.0; centralized.actions()];
    for (s2, w) in weights.probs().iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        for (o, p) in out.iter_mut().zip(centralized.dist(&[own_state, s2])?) {
            *o += w * p;
        }
    }
    normalize(out).ok_or_else(|| Error::Numeric("mixture has zero mass".into()))
}

/// Speaker policy: the centralized policy averaged over the belief about the
/// partner's state, `sum_s2 pi*(a | own, s2) P(s2)`.
pub fn speaker_policy_exact(
    centralized: &FinitePolicy,
    belief: &Belief,
    own_state: usize,
) -> Result<Vec<f64>> {
    mixture(centralized, belief, own_state)
}

/// The full speaker policy table `pi(a | own)` for every own state.
pub fn speaker_policy_table(centralized: &FinitePolicy, belief: &Belief) -> Result<FinitePolicy> {
    let (own, _) = centralized.expect_joint()?;
    let rows = (0..own)
        .map(|s| speaker_policy_exact(centralized, belief, s))
        .collect::<Result<Vec<_>>>()?;
    FinitePolicy::new(vec![own], centralized.actions(), rows.concat())
}

/// Posterior over the speaker's state after seeing `speaker_action`,
/// proportional to `pi_speaker(a | s) * prior(s)`.
pub fn listener_posterior(
    prior: &Belief,
    speaker_action: usize,
    speaker_policy: &FinitePolicy,
) -> Result<Belief> {
    match speaker_policy.shape() {
        [n] if *n == prior.len() => {}
        shape => {
            return Err(Error::Argument(format!(
                "speaker policy of shape {shape:?} for a belief over {} states",
                prior.len()
            )))
        }
    }
    let unnorm = prior
        .probs()
        .iter()
        .enumerate()
        .map(|(s, p)| Ok(p * speaker_policy.prob(&[s], speaker_action)?))
        .collect::<Result<Vec<_>>>()?;
    normalize(unnorm).map(Belief).ok_or_else(|| {
        Error::Inconsistent(format!(
            "action {speaker_action} has zero probability under every state with prior mass"
        ))
    })
}

/// Listener policy: the centralized policy averaged over the posterior about
/// the speaker's state, normalized over the listener's actions.
pub fn listener_policy_exact(
    centralized: &FinitePolicy,
    posterior: &Belief,
    own_state: usize,
) -> Result<Vec<f64>> {
    mixture(centralized, posterior, own_state)
}

/// Mixed-radix index of state histories of a fixed length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistoryIndex {
    pub states: usize,
    pub length: usize,
}

impl HistoryIndex {
    pub fn new(states: usize, length: usize) -> Result<Self> {
        if states == 0 || length == 0 {
            return Err(Error::Dimension(
                "histories need states and length > 0".into(),
            ));
        }
        states
            .checked_pow(length as u32)
            .filter(|n| *n <= 1 << 20)
            .ok_or_else(|| Error::Argument("too many histories to enumerate".into()))?;
        Ok(HistoryIndex { states, length })
    }

    pub fn count(&self) -> usize {
        self.states.pow(self.length as u32)
    }

    /// Index of `history` (oldest first).
    pub fn encode(&self, history: &[usize]) -> Result<usize> {
        if history.len() != self.length || history.iter().any(|s| *s >= self.states) {
            return Err(Error::Argument(format!("invalid history {history:?}")));
        }
        Ok(history.iter().fold(0, |acc, s| acc * self.states + s))
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut h = vec![0; self.length];
        for slot in h.iter_mut().rev() {
            *slot = index % self.states;
            index /= self.states;
        }
        h
    }

    /// Current (most recent) state of a history index.
    pub fn current(&self, index: usize) -> usize {
        index % self.states
    }
}

/// Lifts a policy over current `(own, partner)` states to one over history
/// super-states; the action distribution depends only on the latest states.
pub fn lift_to_histories(
    centralized: &FinitePolicy,
    own: HistoryIndex,
    partner: HistoryIndex,
) -> Result<FinitePolicy> {
    let (n_own, n_partner) = centralized.expect_joint()?;
    if own.states != n_own || partner.states != n_partner {
        return Err(Error::Dimension(
            "history alphabet does not match policy".into(),
        ));
    }
    FinitePolicy::from_fn(
        vec![own.count(), partner.count()],
        centralized.actions(),
        |idx| {
            centralized
                .dist(&[own.current(idx[0]), partner.current(idx[1])])
                .expect("indices in range")
                .to_vec()
        },
    )
}

/// One step of the interdependent fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct InterdependenceIterate {
    pub iteration: usize,
    /// `pi_1(a1 | s1, a2)`, shape `[s1, a2]`.
    pub first: FinitePolicy,
    /// `pi_2(a2 | s2, a1)`, shape `[s2, a1]`.
    pub second: FinitePolicy,
    /// Largest total-variation change of any conditional row in this sweep.
    pub change: f64,
}

fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Runs alternating substitution on the coupled decentralized policies.
///
/// Each agent's policy conditions on its own state and the partner's current
/// action:
///
/// ```text
/// pi_1(a1 | s1, a2) ∝ sum_s2 pi_1*(a1 | s1, s2) pi_2(a2 | s2, a1) P(s2)
/// pi_2(a2 | s2, a1) ∝ sum_s1 pi_2*(a2 | s2, s1) pi_1(a1 | s1, a2) P(s1)
/// ```
///
/// Both start from their speaker forms. Rows with zero mass keep their
/// previous value. Nothing is claimed about convergence; the caller gets the
/// per-sweep change.
pub fn interdependence_demo(
    first_centralized: &FinitePolicy,
    second_centralized: &FinitePolicy,
    prior_first: &Belief,
    prior_second: &Belief,
    iteration_cap: usize,
) -> Result<Vec<InterdependenceIterate>> {
    if iteration_cap == 0 {
        return Err(Error::Argument("iteration cap must be at least 1".into()));
    }
    let (n1, n2) = first_centralized.expect_joint()?;
    let (m2, m1) = second_centralized.expect_joint()?;
    if n1 != m1 || n2 != m2 || prior_first.len() != n1 || prior_second.len() != n2 {
        return Err(Error::Dimension(
            "state spaces of the two agents disagree".into(),
        ));
    }
    let (k1, k2) = (first_centralized.actions(), second_centralized.actions());

    let speaker1 = speaker_policy_table(first_centralized, prior_second)?;
    let speaker2 = speaker_policy_table(second_centralized, prior_first)?;
    let mut pi1 = FinitePolicy::from_fn(vec![n1, k2], k1, |i| {
        speaker1.dist(&[i[0]]).unwrap().to_vec()
    })?;
    let mut pi2 = FinitePolicy::from_fn(vec![n2, k1], k2, |i| {
        speaker2.dist(&[i[0]]).unwrap().to_vec()
    })?;

    let mut out = Vec::with_capacity(iteration_cap);
    for iteration in 1..=iteration_cap {
        let new1 = FinitePolicy::from_fn(vec![n1, k2], k1, |i| {
            let (s1, a2) = (i[0], i[1]);
            let row: Vec<f64> = (0..k1)
                .map(|a1| {
                    (0..n2)
                        .map(|s2| {
                            first_centralized.prob(&[s1, s2], a1).unwrap()
                                * pi2.prob(&[s2, a1], a2).unwrap()
                                * prior_second.probs()[s2]
                        })
                        .sum()
                })
                .collect();
            normalize(row).unwrap_or_else(|| pi1.dist(&[s1, a2]).unwrap().to_vec())
        })?;
        let new2 = FinitePolicy::from_fn(vec![n2, k1], k2, |i| {
            let (s2, a1) = (i[0], i[1]);
            let row: Vec<f64> = (0..k2)
                .map(|a2| {
                    (0..n1)
                        .map(|s1| {
                            second_centralized.prob(&[s2, s1], a2).unwrap()
                                * new1.prob(&[s1, a2], a1).unwrap()
                                * prior_first.probs()[s1]
                        })
                        .sum()
                })
                .collect();
            normalize(row).unwrap_or_else(|| pi2.dist(&[s2, a1]).unwrap().to_vec())
        })?;
        let change = new1
            .table
            .chunks(k1)
            .zip(pi1.table.chunks(k1))
            .map(|(p, q)| tv(p, q))
            .chain(
                new2.table
                    .chunks(k2)
                    .zip(pi2.table.chunks(k2))
                    .map(|(p, q)| tv(p, q)),
            )
            .fold(0.0, f64::max);
        pi1 = new1;
        pi2 = new2;
        out.push(InterdependenceIterate {
            iteration,
            first: pi1.clone(),
            second: pi2.clone(),
            change,
        });
    }
    Ok(out)
}
