//! Finite universes, concept classes and multi-labeled databases.

mod bounds;
mod concept;
mod database;
mod dichotomy;
mod distribution;
mod risk;
mod universe;

pub use bounds::{vc_sample_size, LearningMode};
pub use concept::{xor_eval, ClassTag, Concept};
pub use database::{LabeledView, MultiLabeledDatabase};
pub use dichotomy::{dichotomy_projection, Dichotomy};
pub use distribution::{sample_database, Distribution, LabeledDistribution};
pub use risk::{empirical_error, generalization_error, mismatches};
pub use universe::{DomainElement, Universe, UniverseKind, MAX_PARITY_DIMENSION, MAX_UNIVERSE_SIZE};
