use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::domain::{empirical_error, Concept, LabeledDistribution, MultiLabeledDatabase};
use crate::mechanisms::{PrivacyLedger, PrivacyParams};
use crate::{Error, Result};

/// `(h_1, ..., h_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiHypothesis(Vec<Concept>);

impl MultiHypothesis {
    pub fn new(hypotheses: Vec<Concept>) -> Self {
        MultiHypothesis(hypotheses)
    }

    pub fn all_zero(k: usize) -> Self {
        MultiHypothesis(vec![Concept::Zero; k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, j: usize) -> &Concept {
        &self.0[j]
    }

    pub fn hypotheses(&self) -> &[Concept] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Concept> {
        self.0
    }

    /// Reorders so that new position `j` holds old `perm[j]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        MultiHypothesis(perm.iter().map(|&p| self.0[p]).collect())
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if self.k() != k {
            return Err(Error::LabelCountMismatch { row: 0, found: self.k(), expected: k });
        }
        Ok(())
    }

    /// `error_{S|_j}(h_j)` for every label.
    pub fn empirical_errors(&self, s: &MultiLabeledDatabase) -> Result<Vec<f64>> {
        self.check_k(s.k())?;
        self.0
            .iter()
            .enumerate()
            .map(|(j, h)| {
                let e = empirical_error(&s.view(j)?, h)?;
                Ok(*e.numer() as f64 / *e.denom() as f64)
            })
            .collect()
    }

    /// Exact `error_{P_j}(h_j)` for every label.
    pub fn generalization_errors(&self, dist: &LabeledDistribution) -> Result<Vec<f64>> {
        self.check_k(dist.k())?;
        self.0.iter().enumerate().map(|(j, h)| dist.error(j, h)).collect()
    }
}

/// Result of a learner run.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnOutcome {
    /// `None` when the learner failed (a stable-selection ⊥).
    pub hypotheses: Option<MultiHypothesis>,
    /// Every private access, in the order the algorithm makes them.
    pub ledger: PrivacyLedger,
    /// Total charge claimed for the algorithm; `None` for non-private learners.
    pub charge: Option<PrivacyParams>,
    /// Set when the input is smaller than the learner's planning bound.
    pub below_sample_bound: bool,
}

impl LearnOutcome {
    pub fn non_private(h: MultiHypothesis) -> Self {
        LearnOutcome { hypotheses: Some(h), ledger: PrivacyLedger::new(), charge: None, below_sample_bound: false }
    }

    pub fn is_failure(&self) -> bool {
        self.hypotheses.is_none()
    }
}

/// A learner over k-labeled databases.
pub trait MultiLearner: Send + Sync {
    fn name(&self) -> &'static str;

    fn learn(&self, s: &MultiLabeledDatabase, rng: &mut dyn RngCore) -> Result<LearnOutcome>;
}
