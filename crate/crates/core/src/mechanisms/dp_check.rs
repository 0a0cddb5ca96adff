use crate::{Error, Result};

/// `max_T P(T) - e^ε Q(T)`, attained at `T = {o : p(o) > e^ε q(o)}`.
pub fn privacy_loss_excess(p: &[f64], q: &[f64], epsilon: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::OutcomeMismatch { left: p.len(), right: q.len() });
    }
    let factor = epsilon.exp();
    Ok(p.iter().zip(q).map(|(&a, &b)| (a - factor * b).max(0.0)).sum())
}

/// Checks `P[A(S) ∈ T] <= e^ε P[A(S') ∈ T] + δ` for every outcome set `T`
/// of two exactly known output distributions. A `1e-12` allowance absorbs
/// floating-point error in the pmfs.
pub fn dp_ratio_check(pmf_s: &[f64], pmf_s_prime: &[f64], epsilon: f64, delta: f64) -> Result<bool> {
    Ok(privacy_loss_excess(pmf_s, pmf_s_prime, epsilon)? <= delta + 1e-12)
}
