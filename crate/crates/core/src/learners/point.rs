use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::hypothesis::{LearnOutcome, MultiHypothesis, MultiLearner};
use crate::domain::{ClassTag, Concept, DomainElement, MultiLabeledDatabase};
use crate::error::{open_unit, positive};
use crate::mechanisms::{a_dist, PrivacyLedger, PrivacyParams, ScoredCandidate};
use crate::sanitize::{answers_to_synthetic, sanitize_points};
use crate::{Error, Result};

/// Constant of the planning bound `n = ⌈c/(αε) ln(1/(αβδ))⌉`.
pub const POINT_CONSTANT: f64 = 64.0;

pub fn point_sample_size(alpha: f64, beta: f64, epsilon: f64, delta: f64) -> Result<usize> {
    open_unit("alpha", alpha)?;
    open_unit("beta", beta)?;
    positive("epsilon", epsilon)?;
    open_unit("delta", delta)?;
    Ok((POINT_CONSTANT / (alpha * epsilon) * (1.0 / (alpha * beta * delta)).ln()).ceil() as usize)
}

/// Parameters of the point learner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointLearner {
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub delta: f64,
}

/// Label vectors seen with one heavy element, in first-occurrence order.
struct VectorCounts {
    entries: Vec<(Vec<bool>, usize)>,
}

impl VectorCounts {
    /// Best vector (earliest on ties), its count, and the runner-up count.
    fn top_two(&self, k: usize) -> (Vec<bool>, usize, usize) {
        let mut best: Option<(&Vec<bool>, usize)> = None;
        let mut second = 0;
        for (v, c) in &self.entries {
            match best {
                Some((_, b)) if *c <= b => second = second.max(*c),
                _ => {
                    if let Some((_, b)) = best {
                        second = second.max(b);
                    }
                    best = Some((v, *c));
                }
            }
        }
        match best {
            Some((v, c)) => (v.clone(), c, second),
            None => (vec![false; k], 0, 0),
        }
    }
}

impl PointLearner {
    fn validate(&self) -> Result<()> {
        point_sample_size(self.alpha, self.beta, self.epsilon, self.delta).map(|_| ())
    }

    fn half(&self) -> PrivacyParams {
        PrivacyParams { epsilon: self.epsilon / 2.0, delta: self.delta / 2.0 }
    }

    /// Heavy elements of the sanitized unlabeled rows.
    pub fn heavy_elements<R: Rng + ?Sized>(&self, s: &MultiLabeledDatabase, rng: &mut R) -> Result<Vec<DomainElement>> {
        let half = self.half();
        let answers = sanitize_points(&s.unlabeled_view(), self.alpha / 30.0, half.epsilon, half.delta, rng)?;
        let synthetic = answers_to_synthetic(&answers, self.alpha / 30.0);
        Ok(synthetic
            .distinct()
            .into_iter()
            .filter(|&x| {
                let f = synthetic.frequency(x);
                *f.numer() as f64 / *f.denom() as f64 >= self.alpha / 15.0
            })
            .collect())
    }

    pub fn run<R: Rng + ?Sized>(&self, s: &MultiLabeledDatabase, rng: &mut R) -> Result<LearnOutcome> {
        self.validate()?;
        ClassTag::Point.check_universe(s.universe())?;
        if s.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        let k = s.k();
        let g = self.heavy_elements(s, rng)?;
        let half = self.half();

        let mut tables: Vec<VectorCounts> = g.iter().map(|_| VectorCounts { entries: Vec::new() }).collect();
        for i in 0..s.n() {
            let Ok(slot) = g.binary_search(&s.x(i)) else { continue };
            let v = s.row_labels(i);
            let entries = &mut tables[slot].entries;
            match entries.iter_mut().find(|(w, _)| *w == v) {
                Some((_, c)) => *c += 1,
                None => entries.push((v, 1)),
            }
        }
        let tops: Vec<(Vec<bool>, usize, usize)> = tables.iter().map(|t| t.top_two(k)).collect();

        let hypotheses = if g.is_empty() {
            Some(MultiHypothesis::all_zero(k))
        } else {
            let bests: Vec<usize> = tops.iter().map(|t| t.1).collect();
            let best_q = *bests.iter().min().expect("g is nonempty");
            // min over y != x of best_y, via the two smallest bests
            let mut sorted = bests.clone();
            sorted.sort_unstable();
            let second_q = tops
                .iter()
                .map(|&(_, b, second)| {
                    let others = if sorted.len() < 2 {
                        usize::MAX
                    } else if b == sorted[0] {
                        sorted[1]
                    } else {
                        sorted[0]
                    };
                    second.min(others)
                })
                .max()
                .expect("g is nonempty");
            a_dist(
                ScoredCandidate::new((), best_q as f64),
                ScoredCandidate::new((), second_q as f64),
                half.epsilon,
                half.delta,
                rng,
            )?
            .selected()
            .map(|()| {
                MultiHypothesis::new(
                    (0..k)
                        .map(|j| {
                            g.iter()
                                .zip(&tops)
                                .find(|(_, t)| t.0[j])
                                .map_or(Concept::Zero, |(x, _)| Concept::Point(x.index()))
                        })
                        .collect(),
                )
            })
        };
        Ok(LearnOutcome {
            hypotheses,
            ledger: PrivacyLedger::repeated(half, 2),
            charge: Some(PrivacyParams { epsilon: self.epsilon, delta: self.delta }),
            below_sample_bound: s.n() < point_sample_size(self.alpha, self.beta, self.epsilon, self.delta)?,
        })
    }
}

/// Runs the point learner; `hypotheses` is `None` on failure.
pub fn point_learner<R: Rng + ?Sized>(
    s: &MultiLabeledDatabase,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    delta: f64,
    rng: &mut R,
) -> Result<LearnOutcome> {
    PointLearner { alpha, beta, epsilon, delta }.run(s, rng)
}

impl MultiLearner for PointLearner {
    fn name(&self) -> &'static str {
        "points"
    }

    fn learn(&self, s: &MultiLabeledDatabase, rng: &mut dyn RngCore) -> Result<LearnOutcome> {
        self.run(s, rng)
    }
}
