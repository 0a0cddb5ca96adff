use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::erm::mismatch_table;
use super::hypothesis::{LearnOutcome, MultiHypothesis, MultiLearner};
use crate::domain::{ClassTag, Concept, LabeledView, MultiLabeledDatabase};
use crate::mechanisms::{compose_advanced, compose_basic, exponential_index, PrivacyLedger, PrivacyParams};
use crate::rng::column_stream;
use crate::{Error, Result};

/// How per-label charges are totalled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CompositionMode {
    Basic,
    Advanced { delta_prime: f64 },
}

impl CompositionMode {
    pub fn total(self, ledger: &PrivacyLedger) -> Result<PrivacyParams> {
        match self {
            CompositionMode::Basic => compose_basic(ledger),
            CompositionMode::Advanced { delta_prime } => compose_advanced(ledger, delta_prime),
        }
    }
}

/// A learner for a single labeled column.
pub trait SingleLearner: Send + Sync {
    fn learn_one(&self, view: &LabeledView<'_>, rng: &mut dyn RngCore) -> Result<Concept>;

    /// Privacy charge of one run; `None` when not private.
    fn charge(&self) -> Option<PrivacyParams>;
}

/// Exponential mechanism over the whole class with score `-mismatches`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialLearner {
    pub class: ClassTag,
    pub epsilon: f64,
}

impl SingleLearner for ExponentialLearner {
    fn learn_one(&self, view: &LabeledView<'_>, rng: &mut dyn RngCore) -> Result<Concept> {
        if view.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        let table = mismatch_table(view, self.class)?;
        let scores: Vec<f64> = table.iter().map(|&(_, e)| -(e as f64)).collect();
        Ok(table[exponential_index(&scores, self.epsilon, 1.0, rng)?].0)
    }

    fn charge(&self) -> Option<PrivacyParams> {
        Some(PrivacyParams { epsilon: self.epsilon, delta: 0.0 })
    }
}

/// Runs `base` on every label column of the same rows. Each column gets its
/// own stream keyed by a draw from `rng` and the column contents.
pub fn direct_sum_learner<R: RngCore + ?Sized>(
    base: &dyn SingleLearner,
    s: &MultiLabeledDatabase,
    mode: CompositionMode,
    rng: &mut R,
) -> Result<LearnOutcome> {
    if s.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let key = rng.next_u64();
    let hypotheses = (0..s.k())
        .map(|j| base.learn_one(&s.view(j)?, &mut column_stream(key, s.column(j))))
        .collect::<Result<Vec<_>>>()?;
    let (ledger, charge) = match base.charge() {
        Some(c) => {
            let ledger = PrivacyLedger::repeated(c, s.k());
            let total = if s.k() == 0 { None } else { Some(mode.total(&ledger)?) };
            (ledger, total)
        }
        None => (PrivacyLedger::new(), None),
    };
    Ok(LearnOutcome {
        hypotheses: Some(MultiHypothesis::new(hypotheses)),
        ledger,
        charge,
        below_sample_bound: false,
    })
}

/// [`direct_sum_learner`] as a [`MultiLearner`].
pub struct DirectSumLearner {
    pub base: Box<dyn SingleLearner>,
    pub mode: CompositionMode,
}

impl MultiLearner for DirectSumLearner {
    fn name(&self) -> &'static str {
        "direct-sum"
    }

    fn learn(&self, s: &MultiLabeledDatabase, rng: &mut dyn RngCore) -> Result<LearnOutcome> {
        direct_sum_learner(self.base.as_ref(), s, self.mode, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{sample_database, Distribution, Universe};
    use crate::rng::stream;

    #[test]
    fn basic_charge_is_k_times_base() {
        let u = Universe::indexed(8).unwrap();
        let targets = vec![Concept::Point(1); 4];
        let s = sample_database(&Distribution::uniform(u), &targets, 50, &mut stream(1, &[])).unwrap();
        let base = ExponentialLearner { class: ClassTag::Point, epsilon: 0.1 };
        let out = direct_sum_learner(&base, &s, CompositionMode::Basic, &mut stream(2, &[])).unwrap();
        let charge = out.charge.unwrap();
        assert!((charge.epsilon - 0.4).abs() < 1e-12 && charge.delta == 0.0);
        assert_eq!(out.ledger.len(), 4);

        let adv = direct_sum_learner(&base, &s, CompositionMode::Advanced { delta_prime: 1e-6 }, &mut stream(2, &[]))
            .unwrap();
        let expected = (8.0 * 1e6f64.ln()).sqrt() * 0.1 + 8.0 * 0.01;
        assert!((adv.charge.unwrap().epsilon - expected).abs() < 1e-12);
        assert_eq!(adv.hypotheses, out.hypotheses);
    }

    #[test]
    fn single_label_matches_base() {
        let u = Universe::indexed(8).unwrap();
        let s = sample_database(&Distribution::uniform(u), &[Concept::Point(3)], 40, &mut stream(5, &[])).unwrap();
        let base = ExponentialLearner { class: ClassTag::Point, epsilon: 0.5 };
        let out = direct_sum_learner(&base, &s, CompositionMode::Basic, &mut stream(6, &[])).unwrap();
        let key = stream(6, &[]).next_u64();
        let direct = base.learn_one(&s.view(0).unwrap(), &mut column_stream(key, s.column(0))).unwrap();
        assert_eq!(out.hypotheses.unwrap().get(0), &direct);
        assert_eq!(out.charge, base.charge());
    }

    #[test]
    fn permuting_labels_permutes_output() {
        let u = Universe::indexed(8).unwrap();
        let targets = [Concept::Point(1), Concept::Point(4), Concept::Point(6)];
        let s = sample_database(&Distribution::uniform(u), &targets, 30, &mut stream(9, &[])).unwrap();
        let base = ExponentialLearner { class: ClassTag::Point, epsilon: 0.3 };
        let perm = [1, 2, 0];
        for seed in 0..20 {
            let a = direct_sum_learner(&base, &s, CompositionMode::Basic, &mut stream(seed, &[])).unwrap();
            let b = direct_sum_learner(&base, &s.permute_labels(&perm).unwrap(), CompositionMode::Basic, &mut stream(seed, &[]))
                .unwrap();
            assert_eq!(b.hypotheses.unwrap(), a.hypotheses.unwrap().permute(&perm));
        }
    }
}
