use serde::{Deserialize, Serialize};

use crate::error::{open_unit, positive};
use crate::{Error, Result};

/// An `(ε, δ)` privacy guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        positive("epsilon", epsilon)?;
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::param("delta", delta, "must lie in [0, 1)"));
        }
        Ok(PrivacyParams { epsilon, delta })
    }

    pub fn pure(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0)
    }
}

/// The sequence of charges made by an algorithm, plus the slack `δ'` used
/// when the total is computed with advanced composition.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PrivacyLedger {
    charges: Vec<PrivacyParams>,
    target_delta: Option<f64>,
}

impl PrivacyLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_target_delta(delta_prime: f64) -> Result<Self> {
        open_unit("delta_prime", delta_prime)?;
        Ok(PrivacyLedger {
            charges: Vec::new(),
            target_delta: Some(delta_prime),
        })
    }

    pub fn repeated(charge: PrivacyParams, m: usize) -> Self {
        PrivacyLedger {
            charges: vec![charge; m],
            target_delta: None,
        }
    }

    pub fn charge(&mut self, params: PrivacyParams) {
        self.charges.push(params);
    }

    pub fn extend(&mut self, other: &PrivacyLedger) {
        self.charges.extend_from_slice(&other.charges);
    }

    pub fn charges(&self) -> &[PrivacyParams] {
        &self.charges
    }

    pub fn target_delta(&self) -> Option<f64> {
        self.target_delta
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }
}

/// Basic composition: `m` charges compose to their coordinate-wise sum.
pub fn compose_basic(ledger: &PrivacyLedger) -> Result<PrivacyParams> {
    if ledger.is_empty() {
        return Err(Error::EmptyLedger);
    }
    Ok(ledger.charges.iter().fold(PrivacyParams { epsilon: 0.0, delta: 0.0 }, |acc, c| PrivacyParams {
        epsilon: acc.epsilon + c.epsilon,
        delta: acc.delta + c.delta,
    }))
}

/// `ε' = sqrt(2 m ln(1/δ')) ε + 2 m ε²`.
pub fn advanced_epsilon(m: usize, epsilon: f64, delta_prime: f64) -> f64 {
    let m = m as f64;
    (2.0 * m * (1.0 / delta_prime).ln()).sqrt() * epsilon + 2.0 * m * epsilon * epsilon
}

/// Advanced composition of `m` identical `(ε, δ)` charges:
/// `(sqrt(2 m ln(1/δ')) ε + 2 m ε², m δ + δ')`.
pub fn compose_advanced(ledger: &PrivacyLedger, delta_prime: f64) -> Result<PrivacyParams> {
    open_unit("delta_prime", delta_prime)?;
    let first = *ledger.charges.first().ok_or(Error::EmptyLedger)?;
    if let Some(other) = ledger.charges.iter().find(|c| **c != first) {
        return Err(Error::HeterogeneousCharges {
            first: (first.epsilon, first.delta),
            other: (other.epsilon, other.delta),
        });
    }
    let m = ledger.len();
    Ok(PrivacyParams {
        epsilon: advanced_epsilon(m, first.epsilon, delta_prime),
        delta: m as f64 * first.delta + delta_prime,
    })
}
