//! Stable selection: release the exact maximizer when its lead over the
//! runner-up survives Laplace noise, otherwise release nothing.

use rand::Rng;

use super::exponential::ScoredCandidate;
use super::laplace::{laplace_sample, laplace_upper_tail};
use crate::error::{open_unit, positive};
use crate::{Error, Result};

/// Output of [`a_dist`]: the top candidate, or `Bottom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StableSelection<Id> {
    Selected(Id),
    Bottom,
}

impl<Id> StableSelection<Id> {
    pub fn selected(self) -> Option<Id> {
        match self {
            StableSelection::Selected(id) => Some(id),
            StableSelection::Bottom => None,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, StableSelection::Bottom)
    }
}

/// `(1/ε) ln(1/δ)`: the noisy gap must reach this to release the winner.
pub fn a_dist_threshold(epsilon: f64, delta: f64) -> f64 {
    (1.0 / delta).ln() / epsilon
}

fn check(epsilon: f64, delta: f64, gap: f64) -> Result<()> {
    positive("epsilon", epsilon)?;
    open_unit("delta", delta)?;
    if gap < 0.0 || gap.is_nan() {
        return Err(Error::NegativeGap { gap });
    }
    Ok(())
}

/// Runs stable selection on the top two scores of a sensitivity-1 quality
/// function. Never returns `second.id`.
pub fn a_dist<Id, R: Rng + ?Sized>(
    best: ScoredCandidate<Id>,
    second: ScoredCandidate<Id>,
    epsilon: f64,
    delta: f64,
    rng: &mut R,
) -> Result<StableSelection<Id>> {
    let gap = best.score - second.score;
    check(epsilon, delta, gap)?;
    let noisy_gap = gap + laplace_sample(1.0 / epsilon, rng);
    if noisy_gap < a_dist_threshold(epsilon, delta) {
        Ok(StableSelection::Bottom)
    } else {
        Ok(StableSelection::Selected(best.id))
    }
}

/// Scans `candidates` for the top two scores (first occurrence wins ties)
/// and runs [`a_dist`]. A single candidate competes against a virtual
/// runner-up of score 0.
pub fn a_dist_select<Id: Clone, R: Rng + ?Sized>(
    candidates: &[ScoredCandidate<Id>],
    epsilon: f64,
    delta: f64,
    rng: &mut R,
) -> Result<StableSelection<Id>> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| candidates[b].score.total_cmp(&candidates[a].score).then(a.cmp(&b)));
    let first = order.first().ok_or(Error::EmptyCandidates)?;
    let best = candidates[*first].clone();
    let second_score = order.get(1).map_or(0.0_f64.min(best.score), |&i| candidates[i].score);
    let runner_up = ScoredCandidate::new(best.id.clone(), second_score);
    a_dist(best, runner_up, epsilon, delta, rng)
}

/// Exact probability that [`a_dist`] releases the top candidate at `gap`.
pub fn a_dist_output_probability(gap: f64, epsilon: f64, delta: f64) -> Result<f64> {
    check(epsilon, delta, gap)?;
    Ok(laplace_upper_tail(1.0 / epsilon, a_dist_threshold(epsilon, delta) - gap))
}
