use indexmap::IndexMap;
use multilearn::domain::{ClassTag, Concept, Distribution, LabeledDistribution, Universe};
use multilearn::fingerprint::{attack_trial, bs_length, AttackConfig, PirateVariant};
use multilearn::learners::{Algorithm, LearnOutcome, LearnerSpec, MultiLearner, ParityLearner, PointLearner};
use multilearn::mechanisms::{a_dist, PrivacyParams, ScoredCandidate};
use multilearn::rng::{child, stream};
use multilearn::sanitize::{point_sanitizer_accuracy_n, sanitize_points};
use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::config::{DistKind, ExperimentConfig, ExperimentKind, LabelKind, Params};
use crate::error::{HarnessError, Result};
use crate::learners::{LearnerOptions, LearnerSetup};
use crate::report::{round9, Cell, PointSummary, TrialReport, TrialRow};

const TOLERANCE: f64 = 1e-9;

fn required<T>(value: Option<T>, name: &str, kind: ExperimentKind) -> Result<T> {
    value.ok_or_else(|| HarnessError::config(format!("params.{name}"), format!("required for kind `{}`", kind.name())))
}

/// Maps a parameter error raised while building a setup to a config diagnostic.
pub fn invalid(e: multilearn::Error) -> HarnessError {
    match e {
        multilearn::Error::InvalidParameter { name, .. } => HarnessError::config(format!("params.{name}"), e.to_string()),
        other => HarnessError::config("params", other.to_string()),
    }
}

/// `1/(x+1)²` weights: a few heavy elements and a long light tail.
pub fn mixed_distribution(universe: Universe) -> Result<Distribution> {
    let w: Vec<f64> = (0..universe.size()).map(|x| 1.0 / ((x as f64 + 1.0) * (x as f64 + 1.0))).collect();
    Distribution::from_weights(universe, &w).map_err(invalid)
}

fn marginal(kind: Option<DistKind>, default: DistKind, universe: Universe) -> Result<Distribution> {
    match kind.unwrap_or(default) {
        DistKind::Uniform => Ok(Distribution::uniform(universe)),
        DistKind::Mixed => mixed_distribution(universe),
    }
}

fn universe_for(class: ClassTag, p: &Params, kind: ExperimentKind) -> Result<Universe> {
    if class == ClassTag::Parity {
        Universe::bit_vectors(required(p.d, "d", kind)?).map_err(invalid)
    } else {
        Universe::indexed(required(p.universe, "universe", kind)?).map_err(invalid)
    }
}

/// A uniformly random concept of `class` over `universe`.
pub fn random_concept<R: Rng + ?Sized>(class: ClassTag, universe: &Universe, rng: &mut R) -> Concept {
    let p = rng.gen_range(0..universe.size());
    match class {
        ClassTag::Point => Concept::Point(p),
        ClassTag::Thresh => Concept::Thresh(p),
        ClassTag::Parity => Concept::Parity(p),
        ClassTag::Zero => Concept::Zero,
    }
}

/// A learner run on sampled multi-labeled data.
#[derive(Debug)]
pub struct LearnerTask {
    kind: ExperimentKind,
    learner: LearnerSetup,
    universe: Universe,
    class: ClassTag,
    k: usize,
    n: usize,
    dist: Distribution,
    labels: LabelKind,
    alpha: f64,
}

/// One sweep point, fully resolved and validated.
#[derive(Debug)]
pub enum Setup {
    Adist { gap: f64, epsilon: f64, delta: f64 },
    SanitizePoints { dist: Distribution, n: usize, alpha: f64, epsilon: f64, delta: f64 },
    Learner(Box<LearnerTask>),
    Attack { learner: LearnerSetup, cfg: AttackConfig },
}

/// Metrics of one trial, in column order; `success` and `max_error` feed the summary.
struct Outcome {
    metrics: IndexMap<String, Cell>,
}

impl Outcome {
    fn new(success: bool) -> Self {
        let mut metrics = IndexMap::new();
        metrics.insert("success".to_string(), Cell::Bool(success));
        Outcome { metrics }
    }

    fn set(&mut self, name: &str, value: Cell) {
        self.metrics.insert(name.to_string(), value);
    }

    fn success(&self) -> bool {
        self.metrics["success"].as_bool().unwrap_or(false)
    }

    fn max_error(&self) -> Option<f64> {
        self.metrics.get("max_error").and_then(Cell::as_f64)
    }
}

impl Setup {
    pub fn new(kind: ExperimentKind, p: &Params) -> Result<Setup> {
        let req = |v: Option<f64>, name: &str| required(v, name, kind);
        match kind {
            ExperimentKind::Adist => {
                let (gap, epsilon, delta) = (req(p.gap, "gap")?, req(p.epsilon, "epsilon")?, req(p.delta, "delta")?);
                if !(gap >= 0.0) {
                    return Err(HarnessError::config("params.gap", "must be non-negative"));
                }
                multilearn::mechanisms::PrivacyParams::new(epsilon, delta).map_err(invalid)?;
                if delta == 0.0 {
                    return Err(HarnessError::config("params.delta", "must lie in (0, 1)"));
                }
                Ok(Setup::Adist { gap, epsilon, delta })
            }
            ExperimentKind::SanitizePoints => {
                let universe = Universe::indexed(required(p.universe, "universe", kind)?).map_err(invalid)?;
                let (alpha, epsilon, delta) = (req(p.alpha, "alpha")?, req(p.epsilon, "epsilon")?, req(p.delta, "delta")?);
                let n = match p.n {
                    Some(n) => n,
                    None => point_sanitizer_accuracy_n(alpha, req(p.beta, "beta")?, epsilon, delta).map_err(invalid)?,
                };
                if n == 0 {
                    return Err(HarnessError::config("params.n", "must be at least 1"));
                }
                // dry run validates α, ε, δ
                point_sanitizer_accuracy_n(alpha, 0.5, epsilon, delta).map_err(invalid)?;
                let dist = marginal(p.dist, DistKind::Mixed, universe)?;
                Ok(Setup::SanitizePoints { dist, n, alpha, epsilon, delta })
            }
            ExperimentKind::Erm
            | ExperimentKind::DirectSum
            | ExperimentKind::ParityLearner
            | ExperimentKind::PointLearner
            | ExperimentKind::GenericLearner => Ok(Setup::Learner(Box::new(LearnerTask::new(kind, p)?))),
            ExperimentKind::Attack => {
                let n = required(p.n, "n", kind)?;
                let xi = req(p.xi, "xi")?;
                let code_k = match p.k {
                    Some(k) => k,
                    None => bs_length(n, xi).map_err(invalid)?,
                };
                let variant = p.variant.unwrap_or(PirateVariant::Pac);
                let alpha = p.alpha.unwrap_or(0.1);
                let algorithm = p.learner.unwrap_or(Algorithm::Erm);
                let universe = match variant {
                    PirateVariant::Parity => {
                        if !n.is_power_of_two() {
                            return Err(HarnessError::config("params.n", "the parity variant needs a power of two"));
                        }
                        Universe::bit_vectors(n.trailing_zeros()).map_err(invalid)?
                    }
                    _ => Universe::indexed(n as u32 + 1).map_err(invalid)?,
                };
                let class = match algorithm {
                    Algorithm::Points => ClassTag::Point,
                    Algorithm::Parities => ClassTag::Parity,
                    _ => variant.class(),
                };
                let private = algorithm != Algorithm::Erm;
                let spec = LearnerSpec {
                    algorithm,
                    class,
                    alpha,
                    beta: if private { req(p.beta, "beta")? } else { p.beta.unwrap_or(0.1) },
                    epsilon: if private { req(p.epsilon, "epsilon")? } else { 0.0 },
                    epsilon_prime: p.epsilon_prime,
                    delta: if private { req(p.delta, "delta")? } else { 0.0 },
                    proper: true,
                    agnostic: false,
                };
                let opts = LearnerOptions {
                    spec,
                    delta_prime: p.delta_prime,
                    sanitizer: p.sanitizer,
                    m_hat: p.m_hat,
                    budget: p.budget,
                };
                let learner = LearnerSetup::new(&opts, &universe).map_err(invalid)?;
                let cfg = AttackConfig { n, k: code_k, xi, variant, alpha, strict: p.strict.unwrap_or(false) };
                multilearn::fingerprint::bs_gen(n, code_k, xi, cfg.strict, &mut stream(0, &[])).map_err(invalid)?;
                Ok(Setup::Attack { learner, cfg })
            }
        }
    }

    /// Statically computed total privacy charge of one trial.
    pub fn charge(&self) -> Option<PrivacyParams> {
        match self {
            Setup::Adist { epsilon, delta, .. } | Setup::SanitizePoints { epsilon, delta, .. } => {
                Some(PrivacyParams { epsilon: *epsilon, delta: *delta })
            }
            Setup::Learner(t) => t.learner.charge(t.k),
            Setup::Attack { learner, cfg } => learner.charge(cfg.k),
        }
    }

    fn trial(&self, rng: &mut dyn RngCore) -> Result<Outcome> {
        match self {
            Setup::Adist { gap, epsilon, delta } => {
                let s = a_dist(ScoredCandidate::new(0u8, *gap), ScoredCandidate::new(1u8, 0.0), *epsilon, *delta, rng)?;
                Ok(Outcome::new(s.selected() == Some(0)))
            }
            Setup::SanitizePoints { dist, n, alpha, epsilon, delta } => {
                let d = multilearn::domain::sample_database(dist, &[], *n, &mut child(rng, 0))?;
                let answers = sanitize_points(&d, *alpha, *epsilon, *delta, &mut child(rng, 1))?;
                let max_error = answers.max_error(&d);
                let hist = d.histogram();
                let sub_zero = hist
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| c as f64 / *n as f64 <= alpha / 4.0)
                    .all(|(x, _)| answers.get(multilearn::domain::DomainElement::new(x as u32)) == 0.0);
                let mut o = Outcome::new(max_error <= *alpha);
                o.set("max_error", Cell::float(max_error));
                o.set("subthreshold_zero", sub_zero.into());
                Ok(o)
            }
            Setup::Learner(t) => t.trial(rng),
            Setup::Attack { learner, cfg } => {
                let r = attack_trial(learner, cfg, rng)?;
                let mut o = Outcome::new(r.feasible && r.accused.is_some() && !r.flagged);
                o.set("feasible", r.feasible.into());
                o.set("accused", r.accused.map_or(Cell::Empty, Cell::int));
                o.set("accurate", r.accurate.into());
                o.set("flagged", r.flagged.into());
                for (i, framed) in r.framed.iter().enumerate() {
                    o.set(&format!("framed_{}", i + 1), (*framed).into());
                }
                Ok(o)
            }
        }
    }
}

fn close(a: PrivacyParams, b: PrivacyParams) -> bool {
    let near = |x: f64, y: f64| (x - y).abs() <= TOLERANCE * x.abs().max(y.abs()).max(1.0);
    near(a.epsilon, b.epsilon) && near(a.delta, b.delta)
}

impl LearnerTask {
    fn new(kind: ExperimentKind, p: &Params) -> Result<Self> {
        let req = |v: Option<f64>, name: &str| required(v, name, kind);
        let k = required(p.k, "k", kind)?;
        let (class, algorithm) = match kind {
            ExperimentKind::Erm => (required(p.class, "class", kind)?, Algorithm::Erm),
            ExperimentKind::DirectSum => (required(p.class, "class", kind)?, Algorithm::DirectSum),
            ExperimentKind::ParityLearner => (ClassTag::Parity, Algorithm::Parities),
            ExperimentKind::PointLearner => (ClassTag::Point, Algorithm::Points),
            _ => (p.class.unwrap_or(ClassTag::Point), Algorithm::Generic),
        };
        let universe = universe_for(class, p, kind)?;
        let learner = match algorithm {
            Algorithm::Parities => {
                let l = ParityLearner { epsilon: req(p.epsilon, "epsilon")?, delta: req(p.delta, "delta")?, beta: req(p.beta, "beta")? };
                LearnerSetup::Parities(l)
            }
            Algorithm::Points => LearnerSetup::Points(PointLearner {
                alpha: req(p.alpha, "alpha")?,
                beta: req(p.beta, "beta")?,
                epsilon: req(p.epsilon, "epsilon")?,
                delta: req(p.delta, "delta")?,
            }),
            _ => {
                let generic = algorithm == Algorithm::Generic;
                let spec = LearnerSpec {
                    algorithm,
                    class,
                    alpha: req(p.alpha, "alpha")?,
                    beta: req(p.beta, "beta")?,
                    epsilon: if algorithm == Algorithm::Erm { 0.0 } else { req(p.epsilon, "epsilon")? },
                    epsilon_prime: if generic { Some(req(p.epsilon_prime, "epsilon_prime")?) } else { None },
                    delta: if generic { req(p.delta, "delta")? } else { 0.0 },
                    proper: true,
                    agnostic: p.labels == Some(LabelKind::Adversarial),
                };
                let opts = LearnerOptions {
                    spec,
                    delta_prime: p.delta_prime,
                    sanitizer: p.sanitizer,
                    m_hat: p.m_hat,
                    budget: p.budget,
                };
                LearnerSetup::new(&opts, &universe).map_err(invalid)?
            }
        };
        let planned = learner.plan(&universe, k).map_err(invalid)?;
        let n = p.n.unwrap_or(planned);
        if n == 0 {
            return Err(HarnessError::config("params.n", "must be at least 1"));
        }
        let labels = p.labels.unwrap_or(LabelKind::Realizable);
        if labels == LabelKind::Adversarial && !matches!(kind, ExperimentKind::GenericLearner | ExperimentKind::DirectSum) {
            return Err(HarnessError::config(
                "params.labels",
                "adversarial labels are only supported by generic-learner and direct-sum",
            ));
        }
        let alpha = match learner {
            LearnerSetup::Parities(_) => 0.0,
            _ => req(p.alpha, "alpha")?,
        };
        Ok(LearnerTask {
            kind,
            learner,
            universe,
            class,
            k,
            n,
            dist: marginal(p.dist, DistKind::Uniform, universe)?,
            labels,
            alpha,
        })
    }

    fn labeled(&self, rng: &mut dyn RngCore) -> Result<(LabeledDistribution, Option<Vec<Concept>>)> {
        match self.labels {
            LabelKind::Realizable => {
                let targets: Vec<Concept> = (0..self.k).map(|_| random_concept(self.class, &self.universe, rng)).collect();
                Ok((LabeledDistribution::realizable(&self.dist, &targets)?, Some(targets)))
            }
            LabelKind::Adversarial => {
                let size = self.universe.size() as usize;
                let probs: Vec<Vec<f64>> = (0..self.k).map(|_| (0..size).map(|_| rng.gen::<f64>()).collect()).collect();
                Ok((LabeledDistribution::independent_labels(&self.dist, &probs)?, None))
            }
        }
    }

    fn trial(&self, rng: &mut dyn RngCore) -> Result<Outcome> {
        let (labeled, targets) = self.labeled(&mut child(rng, 0))?;
        let s = labeled.sample_database(self.n, &mut child(rng, 1))?;
        let mut lrng = child(rng, 2);
        let mut structure = None;
        let outcome: LearnOutcome = match &self.learner {
            LearnerSetup::Generic(g) => {
                let run = g.run(&s, &mut lrng)?;
                structure = Some((run.b.len(), run.h.len()));
                run.outcome
            }
            l => l.learn(&s, &mut lrng)?,
        };
        if let Some(charged) = self.learner.charge(self.k) {
            let composed = self.learner.compose(&outcome.ledger)?.unwrap_or(PrivacyParams { epsilon: 0.0, delta: 0.0 });
            let claimed = outcome.charge.unwrap_or(charged);
            if !close(charged, composed) || !close(charged, claimed) {
                return Err(HarnessError::LedgerMismatch {
                    charged: (charged.epsilon, charged.delta),
                    composed: (composed.epsilon, composed.delta),
                });
            }
        }
        let excess = match &outcome.hypotheses {
            Some(h) => {
                let mut worst = 0.0f64;
                for (j, hj) in h.hypotheses().iter().enumerate() {
                    let err = labeled.error(j, hj)?;
                    let opt = match self.labels {
                        LabelKind::Realizable => 0.0,
                        LabelKind::Adversarial => self
                            .class
                            .concepts(&self.universe)?
                            .iter()
                            .map(|c| labeled.error(j, c))
                            .collect::<multilearn::Result<Vec<f64>>>()?
                            .into_iter()
                            .fold(f64::INFINITY, f64::min),
                    };
                    worst = worst.max(err - opt);
                }
                Some(worst)
            }
            None => None,
        };
        let success = match (self.kind, &outcome.hypotheses, &targets) {
            (ExperimentKind::ParityLearner, Some(h), Some(t)) => h.hypotheses() == &t[..],
            (_, Some(_), _) => excess.is_some_and(|e| e <= self.alpha + TOLERANCE),
            _ => false,
        };
        let mut o = Outcome::new(success);
        o.set("failed", outcome.hypotheses.is_none().into());
        o.set("max_error", Cell::opt_float(excess));
        o.set("below_bound", outcome.below_sample_bound.into());
        match self.kind {
            ExperimentKind::PointLearner => {
                let ok = outcome.hypotheses.as_ref().is_none_or(|h| {
                    h.hypotheses().iter().all(|c| matches!(c, Concept::Point(_) | Concept::Zero))
                });
                o.set("point_or_zero", ok.into());
            }
            ExperimentKind::GenericLearner => {
                let (b, h) = structure.expect("generic runs record B and H");
                o.set("b_size", Cell::int(b));
                o.set("h_size", Cell::int(h));
                o.set("h_bound", (b >= 64 || (h as u64) <= 1u64 << b).into());
            }
            _ => {}
        }
        Ok(o)
    }
}

/// Runs every trial of every sweep point on `threads` workers. Trial `t` of
/// point `p` draws from stream `(seed, [p, t])`, so the report does not
/// depend on the thread count.
pub fn run_experiment(config: &ExperimentConfig, threads: usize) -> Result<TrialReport> {
    config.validate()?;
    if threads == 0 {
        return Err(HarnessError::config("threads", "must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::config("threads", e.to_string()))?;
    let mut report = TrialReport::default();
    for (point, params) in config.points().iter().enumerate() {
        let setup = Setup::new(config.kind, params)?;
        let outcomes = pool.install(|| {
            (0..config.trials)
                .into_par_iter()
                .map(|t| setup.trial(&mut stream(config.seed, &[point as u64, t as u64])))
                .collect::<Result<Vec<_>>>()
        })?;
        let successes = outcomes.iter().filter(|o| o.success()).count();
        let errors: Vec<f64> = outcomes.iter().filter_map(Outcome::max_error).collect();
        let charge = setup.charge();
        report.summary.push(PointSummary {
            kind: config.kind.name().to_string(),
            point,
            axis: config.sweep.as_ref().map(|s| s.axis.name().to_string()),
            value: config.sweep.as_ref().map(|s| round9(s.values[point])),
            trials: config.trials,
            successes,
            success_rate: round9(successes as f64 / config.trials as f64),
            mean_max_error: (!errors.is_empty()).then(|| round9(errors.iter().sum::<f64>() / errors.len() as f64)),
            ledger_epsilon: charge.map(|c| round9(c.epsilon)),
            ledger_delta: charge.map(|c| round9(c.delta)),
        });
        if config.rows {
            report.rows.extend(
                outcomes.into_iter().enumerate().map(|(trial, o)| TrialRow { point, trial, metrics: o.metrics }),
            );
        }
    }
    Ok(report)
}
