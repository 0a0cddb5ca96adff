//! Boneh-Shaw fingerprinting codes and pirates built from multi-learners.

mod attack;
mod codebook;
mod pirate;
mod trace;

pub use attack::{attack_experiment, attack_trial, AttackConfig, AttackReport, AttackTrial};
pub use codebook::{bs_gen, bs_length, feasible, tardos_gen, Codebook, Coalition, FingerprintCode, PirateWord};
pub use pirate::{pirate_examples, pirate_from_learner, PirateRun, PirateVariant};
pub use trace::{bs_trace, trace_threshold, TraceResult};
