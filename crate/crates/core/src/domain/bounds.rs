use serde::{Deserialize, Serialize};

use crate::error::open_unit;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearningMode {
    Realizable,
    Agnostic,
}

/// Sample size sufficient for uniform convergence of a class with VC
/// dimension `vc`:
///
/// * realizable: `n >= 64/α · (vc·ln(64/α) + ln(8/β))`
/// * agnostic:   `n >= 64/α² · (vc·ln(6/α) + ln(8/β))`
pub fn vc_sample_size(vc: u32, alpha: f64, beta: f64, mode: LearningMode) -> Result<u64> {
    open_unit("alpha", alpha)?;
    open_unit("beta", beta)?;
    if vc == 0 {
        return Err(Error::param("vc", 0.0, "must be at least 1"));
    }
    let vc = vc as f64;
    let n = match mode {
        LearningMode::Realizable => 64.0 / alpha * (vc * (64.0 / alpha).ln() + (8.0 / beta).ln()),
        LearningMode::Agnostic => 64.0 / (alpha * alpha) * (vc * (6.0 / alpha).ln() + (8.0 / beta).ln()),
    };
    Ok(n.ceil() as u64)
}
