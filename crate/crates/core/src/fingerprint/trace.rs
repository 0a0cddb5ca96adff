use serde::{Deserialize, Serialize};

use super::codebook::Codebook;

/// Output of tracing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceResult {
    Accused(usize),
    NoAccusation,
}

impl TraceResult {
    pub fn accused(self) -> Option<usize> {
        match self {
            TraceResult::Accused(i) => Some(i),
            TraceResult::NoAccusation => None,
        }
    }
}

/// `sqrt(2 d ln(2n/ξ))` for blocks of `d` columns.
pub fn trace_threshold(d: usize, n: usize, xi: f64) -> f64 {
    (2.0 * d as f64 * (2.0 * n as f64 / xi).ln()).sqrt()
}

/// Counts the ones `w` places in each type block, with virtual blocks
/// `B_0` (no ones) and `B_n` (all ones), and accuses the lowest user `s`
/// whose adjacent blocks `B_{s-1}`, `B_s` differ by more than the threshold.
pub fn bs_trace(w: &[bool], code: &Codebook) -> TraceResult {
    assert_eq!(w.len(), code.k(), "pirate word length differs from the code length");
    let n = code.n();
    let d = code.block_size();
    let mut ones = vec![0usize; n + 1];
    ones[n] = d;
    for (&b, &t) in w.iter().zip(code.column_types()) {
        ones[t as usize] += b as usize;
    }
    let threshold = trace_threshold(d, n, code.xi());
    (1..=n)
        .find(|&s| ones[s - 1].abs_diff(ones[s]) as f64 > threshold)
        .map_or(TraceResult::NoAccusation, TraceResult::Accused)
}
