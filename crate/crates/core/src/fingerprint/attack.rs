use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::codebook::{bs_gen, feasible, Coalition, FingerprintCode};
use super::pirate::{pirate_from_learner, PirateVariant};
use crate::learners::MultiLearner;
use crate::rng::{child, stream};
use crate::Result;

/// Code and pirate parameters of an attack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub n: usize,
    pub k: usize,
    pub xi: f64,
    pub variant: PirateVariant,
    pub alpha: f64,
    /// Enforce the code length bound.
    pub strict: bool,
}

/// One codebook attacked by the full coalition and by every `[n] \ {i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackTrial {
    pub feasible: bool,
    pub accused: Option<usize>,
    pub accurate: bool,
    pub flagged: bool,
    /// `framed[i - 1]`: the coalition without user `i` got `i` accused.
    pub framed: Vec<bool>,
}

/// Runs one trial. The codebook and each pirate use child streams of `rng`.
pub fn attack_trial(learner: &dyn MultiLearner, cfg: &AttackConfig, rng: &mut dyn RngCore) -> Result<AttackTrial> {
    let code = bs_gen(cfg.n, cfg.k, cfg.xi, cfg.strict, &mut child(rng, 0))?;
    let full = Coalition::full(cfg.n);
    let run = pirate_from_learner(learner, &code, &full, cfg.variant, cfg.alpha, &mut child(rng, 1))?;
    let accused = code.trace(&run.word).accused();
    let framed = (1..=cfg.n)
        .map(|i| {
            let coalition = Coalition::without(cfg.n, i)?;
            let r = pirate_from_learner(learner, &code, &coalition, cfg.variant, cfg.alpha, &mut child(rng, 1 + i as u64))?;
            Ok(code.trace(&r.word).accused() == Some(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AttackTrial { feasible: feasible(&run.word, &code, &full), accused, accurate: run.accurate, flagged: run.flagged, framed })
}

/// Aggregate rates over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub trials: usize,
    /// Fraction of unflagged trials whose word is feasible and traced.
    pub completeness_rate: f64,
    /// Largest per-user rate of being accused while absent.
    pub soundness_violation_rate: f64,
    pub per_user_violation: Vec<f64>,
    pub accuracy_rate: f64,
    pub flagged_rate: f64,
    pub rows: Vec<AttackTrial>,
}

impl AttackReport {
    pub fn from_trials(n: usize, rows: Vec<AttackTrial>) -> Self {
        let t = rows.len().max(1) as f64;
        let rate = |f: &dyn Fn(&AttackTrial) -> bool| rows.iter().filter(|r| f(r)).count() as f64 / t;
        let unflagged = rows.iter().filter(|r| !r.flagged).count();
        let complete = rows.iter().filter(|r| !r.flagged && r.feasible && r.accused.is_some()).count();
        let per_user_violation: Vec<f64> = (0..n).map(|i| rate(&|r| r.framed[i])).collect();
        AttackReport {
            trials: rows.len(),
            completeness_rate: if unflagged == 0 { 0.0 } else { complete as f64 / unflagged as f64 },
            soundness_violation_rate: per_user_violation.iter().copied().fold(0.0, f64::max),
            per_user_violation,
            accuracy_rate: rate(&|r| r.accurate),
            flagged_rate: rate(&|r| r.flagged),
            rows,
        }
    }
}

/// Runs `trials` independent trials, trial `t` on stream `(seed, [t])`.
pub fn attack_experiment(learner: &dyn MultiLearner, cfg: &AttackConfig, trials: usize, seed: u64) -> Result<AttackReport> {
    let rows = (0..trials)
        .map(|t| attack_trial(learner, cfg, &mut stream(seed, &[t as u64])))
        .collect::<Result<Vec<_>>>()?;
    Ok(AttackReport::from_trials(cfg.n, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{ClassTag, MultiLabeledDatabase};
    use crate::learners::{ErmLearner, LearnOutcome, MultiHypothesis};

    struct AllZero;

    impl MultiLearner for AllZero {
        fn name(&self) -> &'static str {
            "zero"
        }

        fn learn(&self, s: &MultiLabeledDatabase, _rng: &mut dyn RngCore) -> Result<LearnOutcome> {
            Ok(LearnOutcome::non_private(MultiHypothesis::all_zero(s.k())))
        }
    }

    fn cfg(variant: PirateVariant) -> AttackConfig {
        AttackConfig { n: 4, k: 240, xi: 0.1, variant, alpha: 0.1, strict: false }
    }

    #[test]
    fn exact_learner_is_traced() {
        let erm = ErmLearner { class: ClassTag::Thresh };
        let report = attack_experiment(&erm, &cfg(PirateVariant::Pac), 20, 1).unwrap();
        assert_eq!(report.completeness_rate, 1.0);
        assert_eq!(report.accuracy_rate, 1.0);
        assert_eq!(report.soundness_violation_rate, 0.0);
        assert_eq!(report.rows.len(), 20);
    }

    #[test]
    fn all_zero_learner_is_inaccurate_but_feasible() {
        let report = attack_experiment(&AllZero, &cfg(PirateVariant::Pac), 10, 2).unwrap();
        assert_eq!(report.accuracy_rate, 0.0);
        assert!(report.rows.iter().all(|r| r.feasible));
    }

    #[test]
    fn deterministic() {
        let erm = ErmLearner { class: ClassTag::Thresh };
        let a = attack_experiment(&erm, &cfg(PirateVariant::Padded), 5, 9).unwrap();
        let b = attack_experiment(&erm, &cfg(PirateVariant::Padded), 5, 9).unwrap();
        assert_eq!(a, b);
    }
}
