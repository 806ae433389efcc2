use serde::Serialize;

use super::{RoleAllocation, TeamLinearSystem};
use crate::numerics::{eig2x2, eig_general, Complex64, SmallMatrix};
use crate::{Error, Result};

/// Convergence tolerance for the general eigenvalue path.
pub const STABILITY_EIG_TOL: f64 = 1e-13;

/// Gain actually realized by the team under a role allocation.
///
/// Speakers lose every off-diagonal entry of their row (they act on their own
/// state only). Under fast alternation with the rotation construction the
/// averaged gain is the centralized one, so `DynamicAlternating` returns `K*`.
pub fn role_gain(k_star: &SmallMatrix, alloc: RoleAllocation) -> Result<SmallMatrix> {
    if !k_star.is_square() {
        return Err(Error::Dimension("gain must be square".into()));
    }
    let n = k_star.rows();
    alloc.validate(n)?;
    let mut k = k_star.clone();
    let mut mask_row = |i: usize| {
        for j in (0..n).filter(|j| *j != i) {
            k[(i, j)] = 0.0;
        }
    };
    match alloc {
        RoleAllocation::SpeakerSpeaker => (0..n).for_each(&mut mask_row),
        RoleAllocation::SpeakerListener { speaker } => mask_row(speaker),
        RoleAllocation::DynamicAlternating { .. } => {}
    }
    Ok(k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub eigenvalues: Vec<Complex64>,
    pub max_real_part: f64,
    pub stable: bool,
}

/// Eigenvalues of `A - B role_gain(K*)`; stable iff every real part is < 0.
pub fn stability_report(sys: &TeamLinearSystem, alloc: RoleAllocation) -> Result<StabilityReport> {
    sys.validate()?;
    let k = role_gain(&sys.k_star, alloc)?;
    let closed = sys.a.try_sub(&sys.b.matmul(&k)?)?;
    let eigenvalues = if closed.rows() == 2 {
        eig2x2(&closed)?.to_vec()
    } else {
        eig_general(&closed, STABILITY_EIG_TOL)?
    };
    let max_real_part = eigenvalues
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityReport {
        stable: max_real_part < 0.0,
        eigenvalues,
        max_real_part,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    fn m(rows: &[[f64; 2]]) -> SmallMatrix {
        SmallMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn speaker_listener_masks_speaker_row() {
        let k = m(&[[1.0, 2.0], [3.0, 4.0]]);
        let g = role_gain(&k, RoleAllocation::SpeakerListener { speaker: 0 }).unwrap();
        assert_eq!(g, m(&[[1.0, 0.0], [3.0, 4.0]]));
        let g = role_gain(&k, RoleAllocation::SpeakerListener { speaker: 1 }).unwrap();
        assert_eq!(g, m(&[[1.0, 2.0], [0.0, 4.0]]));
    }

    #[test]
    fn speaker_speaker_keeps_diagonal() {
        let k = m(&[[1.0, 2.0], [3.0, 4.0]]);
        let g = role_gain(&k, RoleAllocation::SpeakerSpeaker).unwrap();
        assert_eq!(g, m(&[[1.0, 0.0], [0.0, 4.0]]));
    }

    #[test]
    fn diagonal_gain_unchanged() {
        let k = SmallMatrix::diagonal(&[2.0, -3.0]);
        for alloc in [
            RoleAllocation::SpeakerSpeaker,
            RoleAllocation::SpeakerListener { speaker: 0 },
            RoleAllocation::SpeakerListener { speaker: 1 },
            RoleAllocation::DynamicAlternating { period: 0.1 },
        ] {
            assert_eq!(role_gain(&k, alloc).unwrap(), k);
        }
    }

    #[test]
    fn role_gain_idempotent() {
        let k = m(&[[1.0, 2.0], [3.0, 4.0]]);
        for alloc in [
            RoleAllocation::SpeakerSpeaker,
            RoleAllocation::SpeakerListener { speaker: 1 },
        ] {
            let once = role_gain(&k, alloc).unwrap();
            assert_eq!(role_gain(&once, alloc).unwrap(), once);
        }
    }

    #[test]
    fn invalid_allocations() {
        let k = SmallMatrix::identity(2);
        assert!(role_gain(&k, RoleAllocation::SpeakerListener { speaker: 2 }).is_err());
        assert!(role_gain(&k, RoleAllocation::DynamicAlternating { period: 0.0 }).is_err());
    }

    #[test]
    fn counterexample_is_always_unstable() {
        let mut rng = Rng::new(11);
        for _ in 0..100 {
            let k = m(&[
                [
                    rng.uniform_range(-10.0, 10.0),
                    rng.uniform_range(-10.0, 10.0),
                ],
                [
                    rng.uniform_range(-10.0, 10.0),
                    rng.uniform_range(-10.0, 10.0),
                ],
            ]);
            let sys = TeamLinearSystem::speaker_listener_counterexample(k).unwrap();
            let r = stability_report(&sys, RoleAllocation::SpeakerListener { speaker: 0 }).unwrap();
            assert!(!r.stable);
            assert!(r.max_real_part >= 1.0 - 1e-9, "{r:?}");
        }
    }

    #[test]
    fn stable_plant() {
        let sys = TeamLinearSystem::new(
            SmallMatrix::identity(2).scale(-1.0),
            SmallMatrix::identity(2),
            SmallMatrix::zeros(2, 2),
            vec![],
        )
        .unwrap();
        let r = stability_report(&sys, RoleAllocation::SpeakerSpeaker).unwrap();
        assert!(r.stable);
        for z in &r.eigenvalues {
            assert_eq!(*z, Complex64::new(-1.0, 0.0));
        }
    }

    #[test]
    fn speaker_speaker_counterexample() {
        // A = I, B = swap: eigenvalues 1 +- sqrt(K11 K22).
        let sys = TeamLinearSystem::new(
            SmallMatrix::identity(2),
            m(&[[0.0, 1.0], [1.0, 0.0]]),
            m(&[[2.0, 5.0], [-1.0, 8.0]]),
            vec![],
        )
        .unwrap();
        let r = stability_report(&sys, RoleAllocation::SpeakerSpeaker).unwrap();
        assert!((r.max_real_part - 5.0).abs() < 1e-12);
    }

    #[test]
    fn larger_team_uses_general_path() {
        let sys = TeamLinearSystem::new(
            SmallMatrix::identity(3),
            SmallMatrix::identity(3),
            SmallMatrix::diagonal(&[2.0, 3.0, 4.0]),
            vec![],
        )
        .unwrap();
        let r = stability_report(&sys, RoleAllocation::SpeakerSpeaker).unwrap();
        assert!(r.stable);
        assert!((r.max_real_part + 1.0).abs() < 1e-12);
    }
}
