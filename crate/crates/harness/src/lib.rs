//! Reproducible experiments and a command-line front end for `multilearn`.
//!
//! An [`ExperimentConfig`] (TOML) names an experiment kind, its parameters,
//! an optional sweep and a master seed. [`run_experiment`] runs the trials of
//! every sweep point in parallel on per-trial random streams and returns a
//! [`TrialReport`], which [`emit`] writes as CSV or JSON.

pub mod config;
pub mod error;
pub mod experiment;
pub mod learners;
pub mod report;

pub use config::{Axis, DistKind, ExperimentConfig, ExperimentKind, Format, LabelKind, Params, Sweep};
pub use error::{HarnessError, Result};
pub use experiment::{invalid, mixed_distribution, random_concept, run_experiment, Setup};
pub use learners::{plan_sample_size, LearnerOptions, LearnerSetup, SanitizerKind};
pub use report::{emit, round9, write_output, Cell, PointSummary, Table, TrialReport, TrialRow};
