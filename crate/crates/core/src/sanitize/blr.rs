use rand::Rng;

use super::query::{max_query_error, QueryClass};
use super::synthetic::SyntheticDatabase;
use crate::domain::{DomainElement, MultiLabeledDatabase};
use crate::error::{open_unit, positive};
use crate::mechanisms::exponential_index_by;
use crate::{Error, Result};

/// Largest candidate set [`blr_sanitize`] will enumerate by default.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 20;

/// `⌈VC · ln(1/α) / α²⌉`, at least 1.
pub fn blr_default_size(vc: u32, alpha: f64) -> Result<usize> {
    open_unit("alpha", alpha)?;
    Ok(((vc.max(1) as f64 * (1.0 / alpha).ln() / (alpha * alpha)).ceil() as usize).max(1))
}

/// `|X|^m̂` as a float (may exceed `u64`).
pub fn blr_candidate_count(universe_size: u32, m_hat: usize) -> f64 {
    (universe_size as f64).powi(m_hat as i32)
}

fn decode(index: u64, base: u64, m_hat: usize, out: &mut [u32]) {
    let mut rest = index;
    for slot in out.iter_mut().take(m_hat).rev() {
        *slot = (rest % base) as u32;
        rest /= base;
    }
}

fn checked_count(size: u32, m_hat: usize, budget: u64) -> Result<u64> {
    if m_hat == 0 {
        return Err(Error::param("m_hat", 0.0, "must be at least 1"));
    }
    let count = blr_candidate_count(size, m_hat);
    if count > budget as f64 {
        return Err(Error::BudgetExceeded { candidates: count, budget });
    }
    Ok(count as u64)
}

/// Scores `-n · max_q |q(D) - q(D̂)|` of every `D̂ ∈ X^m̂`, candidates in
/// lexicographic order. With `α >= 1` every score is 0.
pub fn blr_candidate_scores(
    d: &MultiLabeledDatabase,
    query: QueryClass,
    alpha: f64,
    m_hat: usize,
    budget: u64,
) -> Result<Vec<f64>> {
    query.class.check_universe(d.universe())?;
    if d.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    positive("alpha", alpha)?;
    let size = d.universe().size();
    let count = checked_count(size, m_hat, budget)?;
    if alpha >= 1.0 {
        return Ok(vec![0.0; count as usize]);
    }
    let n = d.n() as f64;
    let target: Vec<f64> = d.histogram().iter().map(|&c| c as f64 / n).collect();
    let mut digits = vec![0u32; m_hat];
    let mut diff = target.clone();
    let step = 1.0 / m_hat as f64;
    Ok((0..count)
        .map(|i| {
            decode(i, size as u64, m_hat, &mut digits);
            diff.copy_from_slice(&target);
            for &x in &digits {
                diff[x as usize] -= step;
            }
            -n * max_query_error(query, &diff)
        })
        .collect())
}

/// Exponential mechanism over all ordered databases of size `m̂` with score
/// `-n · max error` and sensitivity 1. Fails with
/// [`Error::BudgetExceeded`] when `|X|^m̂` exceeds `budget`; for point
/// functions at scale use `sanitize_points` instead.
pub fn blr_sanitize<R: Rng + ?Sized>(
    d: &MultiLabeledDatabase,
    query: QueryClass,
    alpha: f64,
    epsilon: f64,
    m_hat: usize,
    budget: u64,
    rng: &mut R,
) -> Result<SyntheticDatabase> {
    positive("epsilon", epsilon)?;
    let scores = blr_candidate_scores(d, query, alpha, m_hat, budget)?;
    let pick = exponential_index_by(scores.len(), |i| scores[i], epsilon, 1.0, rng)?;
    let mut digits = vec![0u32; m_hat];
    decode(pick as u64, d.universe().size() as u64, m_hat, &mut digits);
    let xs = digits.into_iter().map(DomainElement::new).collect();
    Ok(SyntheticDatabase::from_database(MultiLabeledDatabase::unlabeled(*d.universe(), xs)?))
}
