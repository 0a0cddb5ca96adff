use rand::Rng;

use crate::error::positive;
use crate::{Error, Result};

/// A candidate solution with its quality `q(S, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredCandidate<Id> {
    pub id: Id,
    pub score: f64,
}

impl<Id> ScoredCandidate<Id> {
    pub fn new(id: Id, score: f64) -> Self {
        ScoredCandidate { id, score }
    }
}

fn check_args(epsilon: f64, sensitivity: f64) -> Result<()> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::param("epsilon", epsilon, "must be non-negative and finite"));
    }
    positive("sensitivity", sensitivity)
}

/// Selection weights `exp(ε (q - max q) / 2Δ)` for `count` candidates.
fn weights(count: usize, score: &impl Fn(usize) -> f64, epsilon: f64, sensitivity: f64) -> Result<(f64, f64)> {
    if count == 0 {
        return Err(Error::EmptyCandidates);
    }
    let mut max = f64::NEG_INFINITY;
    for i in 0..count {
        let s = score(i);
        if !s.is_finite() {
            return Err(Error::param("score", s, "must be finite"));
        }
        max = max.max(s);
    }
    let scale = epsilon / (2.0 * sensitivity);
    let total = (0..count).map(|i| (scale * (score(i) - max)).exp()).sum();
    Ok((max, total))
}

/// Exponential mechanism over candidates scored by `score(i)`, evaluated
/// lazily so that large enumerated solution sets need not be materialized.
/// Consumes exactly one uniform draw.
pub fn exponential_index_by<R: Rng + ?Sized>(
    count: usize,
    score: impl Fn(usize) -> f64,
    epsilon: f64,
    sensitivity: f64,
    rng: &mut R,
) -> Result<usize> {
    check_args(epsilon, sensitivity)?;
    let (max, total) = weights(count, &score, epsilon, sensitivity)?;
    let scale = epsilon / (2.0 * sensitivity);
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for i in 0..count {
        let w = (scale * (score(i) - max)).exp();
        acc += w;
        if w > 0.0 {
            last_positive = i;
        }
        if target < acc {
            return Ok(i);
        }
    }
    // rounding in the running sum can leave `target` just past the end
    Ok(last_positive)
}

pub fn exponential_index<R: Rng + ?Sized>(scores: &[f64], epsilon: f64, sensitivity: f64, rng: &mut R) -> Result<usize> {
    exponential_index_by(scores.len(), |i| scores[i], epsilon, sensitivity, rng)
}

/// Samples `f` with probability proportional to `exp(ε q(S,f) / 2Δq)`.
pub fn exponential_mechanism<'a, Id, R: Rng + ?Sized>(
    candidates: &'a [ScoredCandidate<Id>],
    epsilon: f64,
    sensitivity: f64,
    rng: &mut R,
) -> Result<&'a Id> {
    let i = exponential_index_by(candidates.len(), |i| candidates[i].score, epsilon, sensitivity, rng)?;
    Ok(&candidates[i].id)
}

/// The exact output distribution of [`exponential_mechanism`].
pub fn em_exact_distribution<Id>(candidates: &[ScoredCandidate<Id>], epsilon: f64, sensitivity: f64) -> Result<Vec<f64>> {
    check_args(epsilon, sensitivity)?;
    let score = |i: usize| candidates[i].score;
    let (max, total) = weights(candidates.len(), &score, epsilon, sensitivity)?;
    let scale = epsilon / (2.0 * sensitivity);
    Ok(candidates
        .iter()
        .map(|c| (scale * (c.score - max)).exp() / total)
        .collect())
}
