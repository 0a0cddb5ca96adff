//! Randomized primitives with exact output distributions.

mod adist;
mod composition;
mod dp_check;
mod exponential;
mod laplace;

pub use adist::{a_dist, a_dist_output_probability, a_dist_select, a_dist_threshold, StableSelection};
pub use composition::{advanced_epsilon, compose_advanced, compose_basic, PrivacyLedger, PrivacyParams};
pub use dp_check::{dp_ratio_check, privacy_loss_excess};
pub use exponential::{
    em_exact_distribution, exponential_index, exponential_index_by, exponential_mechanism, ScoredCandidate,
};
pub use laplace::{laplace_cdf, laplace_sample, laplace_upper_tail};
