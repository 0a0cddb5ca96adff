use rand::{Rng, RngCore};

use super::hypothesis::{LearnOutcome, MultiLearner};
use crate::domain::MultiLabeledDatabase;
use crate::mechanisms::PrivacyParams;
use crate::{Error, Result};

/// Charge of running an `(ε, δ)`-private learner on `n` rows sampled with
/// replacement from `m >= 2n` rows, as stated by the secrecy-of-the-sample
/// lemma: `ε̃ = 6εm/n`, `δ̃ = 4 exp(6εm/n) (m/n) δ`. Requires `ε <= 1`.
///
/// The expression grows with `m/n`; it is exposed verbatim.
pub fn secrecy_of_sample(base: PrivacyParams, m: usize, n: usize) -> Result<PrivacyParams> {
    if !(base.epsilon > 0.0 && base.epsilon <= 1.0) {
        return Err(Error::param("epsilon", base.epsilon, "the amplification lemma requires 0 < epsilon <= 1"));
    }
    if n == 0 || m < 2 * n {
        return Err(Error::InsufficientRows { needed: 2 * n.max(1), have: m });
    }
    let ratio = m as f64 / n as f64;
    let epsilon = 6.0 * base.epsilon * ratio;
    Ok(PrivacyParams { epsilon, delta: 4.0 * epsilon.exp() * ratio * base.delta })
}

/// Runs `base` on `n` rows drawn uniformly with replacement from `s`,
/// which must hold at least `9n` rows.
pub fn pac_to_empirical<R: RngCore + ?Sized>(
    base: &dyn MultiLearner,
    n: usize,
    s: &MultiLabeledDatabase,
    rng: &mut R,
) -> Result<LearnOutcome> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "must be at least 1"));
    }
    if s.n() < 9 * n {
        return Err(Error::InsufficientRows { needed: 9 * n, have: s.n() });
    }
    let rows: Vec<usize> = (0..n).map(|_| rng.gen_range(0..s.n())).collect();
    let mut rng = rng;
    let mut outcome = base.learn(&s.select_rows(&rows), &mut rng)?;
    if let Some(charge) = outcome.charge {
        outcome.charge = Some(secrecy_of_sample(charge, s.n(), n)?);
    }
    Ok(outcome)
}

/// [`pac_to_empirical`] as a [`MultiLearner`].
pub struct Subsampled {
    pub base: Box<dyn MultiLearner>,
    pub n: usize,
}

impl MultiLearner for Subsampled {
    fn name(&self) -> &'static str {
        "subsampled"
    }

    fn learn(&self, s: &MultiLabeledDatabase, rng: &mut dyn RngCore) -> Result<LearnOutcome> {
        pac_to_empirical(self.base.as_ref(), self.n, s, rng)
    }
}
