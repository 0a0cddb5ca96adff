//! Differentially private synthetic-data release for counting queries.

mod blr;
mod points;
mod query;
mod synthetic;

pub use blr::{blr_candidate_count, blr_candidate_scores, blr_default_size, blr_sanitize, DEFAULT_ENUMERATION_BUDGET};
pub use points::{
    answer_distribution, point_sanitizer_accuracy_n, point_sanitizer_privacy_n, sanitize_points, SanitizedAnswers,
};
pub use query::{max_query_error, sanitize_error, QueryClass};
pub use synthetic::{answers_to_synthetic, SyntheticDatabase};
