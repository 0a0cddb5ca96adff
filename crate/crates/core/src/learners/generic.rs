use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::direct_sum::CompositionMode;
use super::erm::mismatch_table;
use super::hypothesis::{LearnOutcome, MultiHypothesis, MultiLearner};
use crate::domain::{dichotomy_projection, ClassTag, Concept, DomainElement, MultiLabeledDatabase, Universe};
use crate::error::{open_unit, positive};
use crate::mechanisms::{advanced_epsilon, exponential_index, PrivacyLedger, PrivacyParams};
use crate::rng::column_stream;
use crate::sanitize::{
    answers_to_synthetic, blr_sanitize, point_sanitizer_accuracy_n, sanitize_points, QueryClass, SyntheticDatabase,
};
use crate::{Error, Result};

/// Sanitizer used for the unlabeled rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "sanitizer", rename_all = "kebab-case")]
pub enum SanitizerChoice {
    /// Noisy point answers at `α/10`, rebuilt into a synthetic database;
    /// point queries are then `α/5`-accurate. Points class only.
    Points,
    /// Exhaustive exponential-mechanism sanitizer for `C⊕` over `X^m̂`.
    Blr { m_hat: usize, budget: u64 },
}

impl SanitizerChoice {
    fn charge(self, epsilon: f64, delta: f64) -> PrivacyParams {
        match self {
            SanitizerChoice::Points => PrivacyParams { epsilon, delta },
            SanitizerChoice::Blr { .. } => PrivacyParams { epsilon, delta: 0.0 },
        }
    }
}

/// Parameters of the generic learner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenericLearner {
    pub class: ClassTag,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub epsilon_prime: f64,
    pub delta: f64,
    pub sanitizer: SanitizerChoice,
    pub composition: CompositionMode,
}

/// Outcome plus the intermediate sets, for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericRun {
    pub outcome: LearnOutcome,
    pub synthetic: SyntheticDatabase,
    /// Distinct elements of the synthetic database.
    pub b: Vec<DomainElement>,
    /// One witness per dichotomy of `b`.
    pub h: Vec<Concept>,
}

/// Total charge of the generic learner: `(ε_s + kε', δ_s)` under basic
/// composition, `(ε_s + sqrt(2k ln(1/δ)) ε' + 2kε'², δ_s + δ)` under advanced.
pub fn generic_privacy(sanitizer: PrivacyParams, epsilon_prime: f64, k: usize, mode: CompositionMode) -> PrivacyParams {
    match mode {
        CompositionMode::Basic => PrivacyParams {
            epsilon: sanitizer.epsilon + k as f64 * epsilon_prime,
            delta: sanitizer.delta,
        },
        CompositionMode::Advanced { delta_prime } => PrivacyParams {
            epsilon: sanitizer.epsilon + advanced_epsilon(k, epsilon_prime, delta_prime),
            delta: sanitizer.delta + delta_prime,
        },
    }
}

impl GenericLearner {
    fn validate(&self) -> Result<()> {
        open_unit("alpha", self.alpha)?;
        open_unit("beta", self.beta)?;
        positive("epsilon", self.epsilon)?;
        positive("epsilon_prime", self.epsilon_prime)?;
        open_unit("delta", self.delta)?;
        if self.sanitizer == SanitizerChoice::Points && !matches!(self.class, ClassTag::Point | ClassTag::Zero) {
            return Err(Error::Unsupported(format!(
                "the point sanitizer cannot release {} queries; choose the enumerative sanitizer",
                self.class
            )));
        }
        Ok(())
    }

    /// Planning sample size with unit constants: sanitizer size plus
    /// `VC ln(1/α)/(α³ε') + ln(k/β)/(αε') + VC ln(k/(αβ))/α²`.
    pub fn sample_size(&self, universe: &Universe, k: usize) -> Result<usize> {
        self.validate()?;
        let (a, b) = (self.alpha, self.beta);
        let vc = self.class.vc_dimension(universe)? as f64;
        let m = match self.sanitizer {
            SanitizerChoice::Points => point_sanitizer_accuracy_n(a / 10.0, b / 5.0, self.epsilon, self.delta)? as f64,
            SanitizerChoice::Blr { m_hat, .. } => {
                // |X|^m̂ exp(-ε (α/5) n / 2) <= β/5
                2.0 * (m_hat as f64 * (universe.size() as f64).ln() + (5.0 / b).ln()) / (self.epsilon * a / 5.0)
            }
        };
        let k = k.max(1) as f64;
        let rest = vc * (1.0 / a).ln() / (a.powi(3) * self.epsilon_prime)
            + (k / b).ln() / (a * self.epsilon_prime)
            + vc * (k / (a * b)).ln() / (a * a);
        Ok((m + rest).ceil() as usize)
    }

    fn sanitize<R: Rng + ?Sized>(&self, s: &MultiLabeledDatabase, rng: &mut R) -> Result<SyntheticDatabase> {
        let d = s.unlabeled_view();
        match self.sanitizer {
            SanitizerChoice::Points => {
                let answers = sanitize_points(&d, self.alpha / 10.0, self.epsilon, self.delta, rng)?;
                Ok(answers_to_synthetic(&answers, self.alpha / 10.0))
            }
            SanitizerChoice::Blr { m_hat, budget } => {
                blr_sanitize(&d, QueryClass::xor(self.class), self.alpha / 5.0, self.epsilon, m_hat, budget, rng)
            }
        }
    }

    pub fn run<R: RngCore + ?Sized>(&self, s: &MultiLabeledDatabase, rng: &mut R) -> Result<GenericRun> {
        self.validate()?;
        if s.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        let universe = *s.universe();
        self.class.check_universe(&universe)?;
        let synthetic = self.sanitize(s, rng)?;
        let b = synthetic.distinct();
        let h: Vec<Concept> = dichotomy_projection(self.class, &universe, &b)?
            .into_iter()
            .map(|d| d.witness)
            .collect();

        let key = rng.next_u64();
        let mut selections = Vec::with_capacity(s.k());
        for j in 0..s.k() {
            let table = mismatch_table(&s.view(j)?, self.class)?;
            let scores: Vec<f64> =
                h.iter().map(|c| -(table[c.parameter().unwrap_or(0) as usize].1 as f64)).collect();
            let pick = exponential_index(&scores, self.epsilon_prime, 1.0, &mut column_stream(key, s.column(j)))?;
            selections.push(h[pick]);
        }

        let sanitizer_charge = self.sanitizer.charge(self.epsilon, self.delta);
        let mut ledger = match self.composition {
            CompositionMode::Basic => PrivacyLedger::new(),
            CompositionMode::Advanced { delta_prime } => PrivacyLedger::with_target_delta(delta_prime)?,
        };
        ledger.charge(sanitizer_charge);
        for _ in 0..s.k() {
            ledger.charge(PrivacyParams { epsilon: self.epsilon_prime, delta: 0.0 });
        }
        let planned = self.sample_size(&universe, s.k())?;
        Ok(GenericRun {
            outcome: LearnOutcome {
                hypotheses: Some(MultiHypothesis::new(selections)),
                ledger,
                charge: Some(generic_privacy(sanitizer_charge, self.epsilon_prime, s.k(), self.composition)),
                below_sample_bound: s.n() < planned,
            },
            synthetic,
            b,
            h,
        })
    }
}

/// Runs the generic learner and returns only its outcome.
pub fn generic_learner<R: RngCore + ?Sized>(
    s: &MultiLabeledDatabase,
    learner: &GenericLearner,
    rng: &mut R,
) -> Result<LearnOutcome> {
    Ok(learner.run(s, rng)?.outcome)
}

impl MultiLearner for GenericLearner {
    fn name(&self) -> &'static str {
        "generic"
    }

    fn learn(&self, s: &MultiLabeledDatabase, rng: &mut dyn RngCore) -> Result<LearnOutcome> {
        generic_learner(s, self, rng)
    }
}
