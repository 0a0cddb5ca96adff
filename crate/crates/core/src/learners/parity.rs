use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::gf2::gf2_solve;
use super::hypothesis::{LearnOutcome, MultiHypothesis, MultiLearner};
use crate::domain::{ClassTag, Concept, MultiLabeledDatabase};
use crate::error::{open_unit, positive};
use crate::mechanisms::{a_dist, PrivacyLedger, PrivacyParams, ScoredCandidate};
use crate::{Error, Result};

/// Rows per block relative to the dimension.
pub const BLOCK_FACTOR: usize = 4;

/// Number of blocks `m = ⌈(8/ε) ln(4/(βδ))⌉`.
pub fn parity_blocks(epsilon: f64, beta: f64, delta: f64) -> Result<usize> {
    positive("epsilon", epsilon)?;
    open_unit("beta", beta)?;
    open_unit("delta", delta)?;
    Ok((8.0 / epsilon * (4.0 / (beta * delta)).ln()).ceil() as usize)
}

/// Multiset of per-block solutions; `None` marks a block with some
/// unsolvable column. Entries keep first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CandidateVectorCounts {
    entries: Vec<(Option<Vec<u32>>, usize)>,
}

impl CandidateVectorCounts {
    pub fn insert(&mut self, v: Option<Vec<u32>>) {
        match self.entries.iter_mut().find(|(w, _)| *w == v) {
            Some((_, c)) => *c += 1,
            None => self.entries.push((v, 1)),
        }
    }

    pub fn entries(&self) -> &[(Option<Vec<u32>>, usize)] {
        &self.entries
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    pub fn multiplicity(&self, v: &[u32]) -> usize {
        self.entries
            .iter()
            .find(|(w, _)| w.as_deref() == Some(v))
            .map_or(0, |(_, c)| *c)
    }

    /// Most frequent solution vector (earliest on ties) and the runner-up
    /// multiplicity, 0 if there is no other vector.
    pub fn top_two(&self) -> Option<(&[u32], usize, usize)> {
        let mut best: Option<(&[u32], usize)> = None;
        let mut second = 0;
        for (v, c) in &self.entries {
            let Some(v) = v else { continue };
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
        best.map(|(v, c)| (v, c, second))
    }
}

/// Parameters of the parity learner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParityLearner {
    pub epsilon: f64,
    pub delta: f64,
    pub beta: f64,
}

impl ParityLearner {
    /// Planned `n = m · 4d`.
    pub fn sample_size(&self, d: u32) -> Result<usize> {
        Ok(parity_blocks(self.epsilon, self.beta, self.delta)? * BLOCK_FACTOR * d as usize)
    }

    /// Block solutions of `s` split into `m` consecutive blocks of `⌊n/m⌋` rows.
    pub fn candidates(&self, s: &MultiLabeledDatabase) -> Result<CandidateVectorCounts> {
        ClassTag::Parity.check_universe(s.universe())?;
        let d = s.universe().dimension().expect("parity universes have a dimension");
        let m = parity_blocks(self.epsilon, self.beta, self.delta)?;
        if s.n() < m {
            return Err(Error::InsufficientRows { needed: m, have: s.n() });
        }
        let size = s.n() / m;
        let mut counts = CandidateVectorCounts::default();
        for t in 0..m {
            let rows = t * size..(t + 1) * size;
            let solution: Option<Vec<u32>> = (0..s.k())
                .map(|j| {
                    let eqs: Vec<(u32, bool)> = rows.clone().map(|i| (s.x(i).bits(), s.label(i, j))).collect();
                    gf2_solve(d, &eqs)
                })
                .collect();
            counts.insert(solution);
        }
        Ok(counts)
    }

    pub fn run<R: Rng + ?Sized>(&self, s: &MultiLabeledDatabase, rng: &mut R) -> Result<LearnOutcome> {
        let counts = self.candidates(s)?;
        let d = s.universe().dimension().expect("checked above");
        let charge = PrivacyParams { epsilon: self.epsilon, delta: self.delta };
        let hypotheses = match counts.top_two() {
            None => None,
            Some((v, best, second)) => a_dist(
                ScoredCandidate::new(v, best as f64),
                ScoredCandidate::new(v, second as f64),
                self.epsilon,
                self.delta,
                rng,
            )?
            .selected()
            .map(|v| MultiHypothesis::new(v.iter().map(|&a| Concept::Parity(a)).collect())),
        };
        Ok(LearnOutcome {
            hypotheses,
            ledger: PrivacyLedger::repeated(charge, 1),
            charge: Some(charge),
            below_sample_bound: s.n() < self.sample_size(d)?,
        })
    }
}

/// Runs the parity learner; `hypotheses` is `None` on failure.
pub fn parity_learner<R: Rng + ?Sized>(
    s: &MultiLabeledDatabase,
    epsilon: f64,
    delta: f64,
    beta: f64,
    rng: &mut R,
) -> Result<LearnOutcome> {
    ParityLearner { epsilon, delta, beta }.run(s, rng)
}

impl MultiLearner for ParityLearner {
    fn name(&self) -> &'static str {
        "parities"
    }

    fn learn(&self, s: &MultiLabeledDatabase, rng: &mut dyn RngCore) -> Result<LearnOutcome> {
        self.run(s, rng)
    }
}
