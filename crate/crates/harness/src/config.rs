use std::path::Path;

use multilearn::domain::ClassTag;
use multilearn::fingerprint::PirateVariant;
use multilearn::learners::Algorithm;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::learners::SanitizerKind;

/// What a configured experiment measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Stable selection on two candidates separated by `gap`.
    Adist,
    /// Point sanitizer accuracy on sampled databases.
    SanitizePoints,
    /// Non-private ERM on realizable targets.
    Erm,
    /// Per-label exponential mechanism over the class.
    DirectSum,
    ParityLearner,
    PointLearner,
    /// Generic learner against realizable or adversarial labels.
    GenericLearner,
    /// Boneh-Shaw attack driven by a learner.
    Attack,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Adist => "adist",
            ExperimentKind::SanitizePoints => "sanitize-points",
            ExperimentKind::Erm => "erm",
            ExperimentKind::DirectSum => "direct-sum",
            ExperimentKind::ParityLearner => "parity-learner",
            ExperimentKind::PointLearner => "point-learner",
            ExperimentKind::GenericLearner => "generic-learner",
            ExperimentKind::Attack => "attack",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Parameter varied across sweep points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    N,
    K,
    D,
    Universe,
    Alpha,
    Epsilon,
    Gap,
    Xi,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::N => "n",
            Axis::K => "k",
            Axis::D => "d",
            Axis::Universe => "universe",
            Axis::Alpha => "alpha",
            Axis::Epsilon => "epsilon",
            Axis::Gap => "gap",
            Axis::Xi => "xi",
        }
    }

    fn integral(self) -> bool {
        matches!(self, Axis::N | Axis::K | Axis::D | Axis::Universe)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: Axis,
    pub values: Vec<f64>,
}

/// Marginal distribution over the universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistKind {
    Uniform,
    /// Weights proportional to `1/(x+1)²`.
    Mixed,
}

/// How labels are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelKind {
    /// Random target concepts from the class.
    Realizable,
    /// Independent labels with per-element probabilities drawn uniformly.
    Adversarial,
}

/// Experiment parameters; which ones are required depends on the kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub d: Option<u32>,
    pub universe: Option<u32>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub epsilon: Option<f64>,
    pub epsilon_prime: Option<f64>,
    pub delta: Option<f64>,
    pub delta_prime: Option<f64>,
    pub gap: Option<f64>,
    pub xi: Option<f64>,
    pub class: Option<ClassTag>,
    pub variant: Option<PirateVariant>,
    pub learner: Option<Algorithm>,
    pub sanitizer: Option<SanitizerKind>,
    pub m_hat: Option<usize>,
    pub budget: Option<u64>,
    pub dist: Option<DistKind>,
    pub labels: Option<LabelKind>,
    pub strict: Option<bool>,
}

impl Params {
    /// Copy with the sweep axis set to `value`.
    pub fn with_axis(&self, axis: Axis, value: f64) -> Params {
        let mut p = self.clone();
        match axis {
            Axis::N => p.n = Some(value as usize),
            Axis::K => p.k = Some(value as usize),
            Axis::D => p.d = Some(value as u32),
            Axis::Universe => p.universe = Some(value as u32),
            Axis::Alpha => p.alpha = Some(value),
            Axis::Epsilon => p.epsilon = Some(value),
            Axis::Gap => p.gap = Some(value),
            Axis::Xi => p.xi = Some(value),
        }
        p
    }
}

/// A declarative experiment: one kind, one parameter set, an optional sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub trials: usize,
    #[serde(default)]
    pub format: Format,
    /// Keep per-trial rows in the report.
    #[serde(default)]
    pub rows: bool,
    #[serde(default)]
    pub params: Params,
    pub sweep: Option<Sweep>,
}

/// Extracts the field name from a serde message such as ``missing field `seed` ``.
fn field_in(message: &str) -> Option<&str> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(&message[start..start + len])
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let path = match field_in(&message) {
                Some(f) if message.contains("field") => f.to_string(),
                _ => "<config>".to_string(),
            };
            HarnessError::config(path, message)
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    /// Structural checks plus a dry build of every sweep point.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(HarnessError::config("trials", "must be at least 1"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(HarnessError::config("sweep.values", "must not be empty"));
            }
            for (i, &v) in sweep.values.iter().enumerate() {
                let path = format!("sweep.values[{i}]");
                if !v.is_finite() || (sweep.axis.integral() && (v < 0.0 || v.fract() != 0.0)) {
                    return Err(HarnessError::config(path, format!("{v} is not a valid {}", sweep.axis.name())));
                }
                if i > 0 && v <= sweep.values[i - 1] {
                    return Err(HarnessError::config(path, "sweep values must be strictly increasing"));
                }
            }
        }
        for params in self.points() {
            crate::experiment::Setup::new(self.kind, &params)?;
        }
        Ok(())
    }

    /// Parameters of each sweep point, in order.
    pub fn points(&self) -> Vec<Params> {
        match &self.sweep {
            Some(s) => s.values.iter().map(|&v| self.params.with_axis(s.axis, v)).collect(),
            None => vec![self.params.clone()],
        }
    }
}
