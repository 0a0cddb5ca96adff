//! Multi-learners: each consumes a k-labeled database and returns k
//! hypotheses together with the privacy charge it incurred.

mod direct_sum;
mod erm;
mod generic;
mod gf2;
mod hypothesis;
mod parity;
mod point;
mod rounding;
mod spec;
mod subsample;

pub use direct_sum::{direct_sum_learner, CompositionMode, DirectSumLearner, ExponentialLearner, SingleLearner};
pub use erm::{erm_multi, erm_single, ErmLearner};
pub use generic::{generic_learner, generic_privacy, GenericLearner, GenericRun, SanitizerChoice};
pub use gf2::gf2_solve;
pub use hypothesis::{LearnOutcome, MultiHypothesis, MultiLearner};
pub use parity::{parity_blocks, parity_learner, CandidateVectorCounts, ParityLearner};
pub use point::{point_learner, point_sample_size, PointLearner, POINT_CONSTANT};
pub use rounding::round_parity;
pub use spec::{Algorithm, LearnerSpec};
pub use subsample::{pac_to_empirical, secrecy_of_sample, Subsampled};
