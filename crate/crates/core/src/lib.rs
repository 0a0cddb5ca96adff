//! Differentially private multi-concept learning at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`domain`]: finite universes, the POINT / THRESH / PAR concept classes,
//!   multi-labeled databases, error functionals and VC sample-size bounds.
//! * [`mechanisms`]: Laplace noise, the exponential mechanism, stable
//!   selection (`a_dist`) and composition accounting, with exact output
//!   distributions for privacy testing.
//! * [`sanitize`]: synthetic-data release for point queries and an
//!   enumerative exponential-mechanism sanitizer for small classes.
//! * [`learners`]: ERM, direct-sum, generic, parity and point multi-learners.
//! * [`fingerprint`]: Boneh-Shaw codes and learner-driven pirate attacks.
//!
//! All randomness flows through caller-provided RNG handles; [`rng::stream`]
//! derives independent, reproducible streams from a master seed.

pub mod domain;
pub mod error;
pub mod fingerprint;
pub mod learners;
pub mod mechanisms;
pub mod rng;
pub mod sanitize;

pub use error::{Error, Result};
