use multilearn::domain::{vc_sample_size, ClassTag, LearningMode, MultiLabeledDatabase, Universe};
use multilearn::learners::{
    generic_privacy, Algorithm, CompositionMode, DirectSumLearner, ErmLearner, ExponentialLearner, GenericLearner,
    LearnOutcome, LearnerSpec, MultiLearner, ParityLearner, PointLearner, SanitizerChoice,
};
use multilearn::mechanisms::{compose_advanced, compose_basic, PrivacyLedger, PrivacyParams};
use multilearn::sanitize::{blr_default_size, DEFAULT_ENUMERATION_BUDGET};
use multilearn::{Error, Result};
use rand::RngCore;
use serde::{Deserialize, Serialize};

/// Sanitizer family for the generic learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SanitizerKind {
    Points,
    Blr,
}

/// Everything needed to instantiate one of the multi-learners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnerOptions {
    pub spec: LearnerSpec,
    pub delta_prime: Option<f64>,
    pub sanitizer: Option<SanitizerKind>,
    pub m_hat: Option<usize>,
    pub budget: Option<u64>,
}

impl LearnerOptions {
    pub fn new(spec: LearnerSpec) -> Self {
        LearnerOptions { spec, delta_prime: None, sanitizer: None, m_hat: None, budget: None }
    }
}

/// A configured multi-learner with its static privacy charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LearnerSetup {
    Erm { learner: ErmLearner, mode: LearningMode, alpha: f64, beta: f64 },
    DirectSum { base: ExponentialLearner, mode: CompositionMode, alpha: f64, beta: f64, agnostic: bool },
    Generic(GenericLearner),
    Parities(ParityLearner),
    Points(PointLearner),
}

fn composition(delta_prime: Option<f64>) -> CompositionMode {
    match delta_prime {
        Some(delta_prime) => CompositionMode::Advanced { delta_prime },
        None => CompositionMode::Basic,
    }
}

impl LearnerSetup {
    pub fn new(opts: &LearnerOptions, universe: &Universe) -> Result<Self> {
        let spec = opts.spec;
        spec.validate()?;
        spec.class.check_universe(universe)?;
        let mode = if spec.agnostic { LearningMode::Agnostic } else { LearningMode::Realizable };
        Ok(match spec.algorithm {
            Algorithm::Erm => {
                LearnerSetup::Erm { learner: ErmLearner { class: spec.class }, mode, alpha: spec.alpha, beta: spec.beta }
            }
            Algorithm::DirectSum => LearnerSetup::DirectSum {
                base: ExponentialLearner { class: spec.class, epsilon: spec.epsilon },
                mode: composition(opts.delta_prime),
                alpha: spec.alpha,
                beta: spec.beta,
                agnostic: spec.agnostic,
            },
            Algorithm::Generic => {
                let kind = opts.sanitizer.unwrap_or(match spec.class {
                    ClassTag::Point | ClassTag::Zero => SanitizerKind::Points,
                    _ => SanitizerKind::Blr,
                });
                let sanitizer = match kind {
                    SanitizerKind::Points => SanitizerChoice::Points,
                    SanitizerKind::Blr => SanitizerChoice::Blr {
                        m_hat: match opts.m_hat {
                            Some(m) => m,
                            None => blr_default_size(spec.class.vc_dimension(universe)?, spec.alpha / 5.0)?,
                        },
                        budget: opts.budget.unwrap_or(DEFAULT_ENUMERATION_BUDGET),
                    },
                };
                LearnerSetup::Generic(GenericLearner {
                    class: spec.class,
                    alpha: spec.alpha,
                    beta: spec.beta,
                    epsilon: spec.epsilon,
                    epsilon_prime: spec.epsilon_prime.expect("validated"),
                    delta: spec.delta,
                    sanitizer,
                    composition: composition(opts.delta_prime),
                })
            }
            Algorithm::Parities => {
                LearnerSetup::Parities(ParityLearner { epsilon: spec.epsilon, delta: spec.delta, beta: spec.beta })
            }
            Algorithm::Points => LearnerSetup::Points(PointLearner {
                alpha: spec.alpha,
                beta: spec.beta,
                epsilon: spec.epsilon,
                delta: spec.delta,
            }),
        })
    }

    /// Total charge of one run on `k` labels; `None` for non-private learners.
    pub fn charge(&self, k: usize) -> Option<PrivacyParams> {
        match *self {
            LearnerSetup::Erm { .. } => None,
            LearnerSetup::DirectSum { base, mode, .. } => match mode {
                CompositionMode::Basic => {
                    compose_basic(&PrivacyLedger::repeated(PrivacyParams { epsilon: base.epsilon, delta: 0.0 }, k)).ok()
                }
                CompositionMode::Advanced { delta_prime } => {
                    compose_advanced(&PrivacyLedger::repeated(PrivacyParams { epsilon: base.epsilon, delta: 0.0 }, k), delta_prime)
                        .ok()
                }
            },
            LearnerSetup::Generic(g) => {
                let sanitizer = match g.sanitizer {
                    SanitizerChoice::Points => PrivacyParams { epsilon: g.epsilon, delta: g.delta },
                    SanitizerChoice::Blr { .. } => PrivacyParams { epsilon: g.epsilon, delta: 0.0 },
                };
                Some(generic_privacy(sanitizer, g.epsilon_prime, k, g.composition))
            }
            LearnerSetup::Parities(p) => Some(PrivacyParams { epsilon: p.epsilon, delta: p.delta }),
            LearnerSetup::Points(p) => Some(PrivacyParams { epsilon: p.epsilon, delta: p.delta }),
        }
    }

    /// Composes the ledger of a run the same way the learner totals it.
    pub fn compose(&self, ledger: &PrivacyLedger) -> Result<Option<PrivacyParams>> {
        if ledger.is_empty() {
            return Ok(None);
        }
        let advanced = match *self {
            LearnerSetup::DirectSum { mode: CompositionMode::Advanced { delta_prime }, .. } => {
                return compose_advanced(ledger, delta_prime).map(Some)
            }
            LearnerSetup::Generic(GenericLearner { composition: CompositionMode::Advanced { delta_prime }, .. }) => {
                delta_prime
            }
            _ => return compose_basic(ledger).map(Some),
        };
        let (first, rest) = ledger.charges().split_first().expect("nonempty");
        if rest.is_empty() {
            return Ok(Some(*first));
        }
        let mut tail = PrivacyLedger::new();
        rest.iter().for_each(|&c| tail.charge(c));
        let t = compose_advanced(&tail, advanced)?;
        Ok(Some(PrivacyParams { epsilon: first.epsilon + t.epsilon, delta: first.delta + t.delta }))
    }

    /// Planning sample size with the pinned constants.
    pub fn plan(&self, universe: &Universe, k: usize) -> Result<usize> {
        match *self {
            LearnerSetup::Erm { learner, mode, alpha, beta } => {
                let vc = learner.class.vc_dimension(universe)?;
                Ok(vc_sample_size(vc.max(1), alpha, beta, mode)? as usize)
            }
            LearnerSetup::DirectSum { base, alpha, beta, agnostic, .. } => {
                // uniform convergence at α/2 plus 4 ln(2k|C|/β)/(αε)
                let mode = if agnostic { LearningMode::Agnostic } else { LearningMode::Realizable };
                let vc = base.class.vc_dimension(universe)?.max(1);
                let uc = vc_sample_size(vc, alpha / 2.0, beta / 2.0, mode)? as f64;
                let size = base.class.class_size(universe) as f64;
                let em = 4.0 * (2.0 * k.max(1) as f64 * size / beta).ln() / (alpha * base.epsilon);
                Ok((uc + em.ceil()) as usize)
            }
            LearnerSetup::Generic(g) => g.sample_size(universe, k),
            LearnerSetup::Parities(p) => {
                let d = universe
                    .dimension()
                    .ok_or_else(|| Error::Unsupported("parities need a bit-vector universe".into()))?;
                p.sample_size(d)
            }
            LearnerSetup::Points(p) => multilearn::learners::point_sample_size(p.alpha, p.beta, p.epsilon, p.delta),
        }
    }
}

impl MultiLearner for LearnerSetup {
    fn name(&self) -> &'static str {
        match self {
            LearnerSetup::Erm { .. } => "erm",
            LearnerSetup::DirectSum { .. } => "direct-sum",
            LearnerSetup::Generic(_) => "generic",
            LearnerSetup::Parities(_) => "parities",
            LearnerSetup::Points(_) => "points",
        }
    }

    fn learn(&self, s: &MultiLabeledDatabase, rng: &mut dyn RngCore) -> Result<LearnOutcome> {
        match self {
            LearnerSetup::Erm { learner, .. } => learner.learn(s, rng),
            LearnerSetup::DirectSum { base, mode, .. } => {
                DirectSumLearner { base: Box::new(*base), mode: *mode }.learn(s, rng)
            }
            LearnerSetup::Generic(g) => g.learn(s, rng),
            LearnerSetup::Parities(p) => p.learn(s, rng),
            LearnerSetup::Points(p) => p.learn(s, rng),
        }
    }
}

/// Planning sample size for a learner specification.
pub fn plan_sample_size(spec: &LearnerSpec, universe: &Universe, k: usize) -> Result<usize> {
    LearnerSetup::new(&LearnerOptions::new(*spec), universe)?.plan(universe, k)
}
