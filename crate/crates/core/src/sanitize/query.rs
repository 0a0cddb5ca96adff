use serde::{Deserialize, Serialize};

use crate::domain::{ClassTag, MultiLabeledDatabase};
use crate::{Error, Result};

/// A family of counting queries: the concepts of a class, or the pairwise
/// XORs `f ⊕ g` of its concepts when `xor` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryClass {
    pub class: ClassTag,
    pub xor: bool,
}

impl QueryClass {
    pub fn plain(class: ClassTag) -> Self {
        QueryClass { class, xor: false }
    }

    pub fn xor(class: ClassTag) -> Self {
        QueryClass { class, xor: true }
    }
}

/// `max_q |q(D) - q(D̂)|` given `diff[x] = c_x(D) - c_x(D̂)`.
///
/// Points, thresholds and their XOR classes use closed forms over the
/// frequency difference; parities are enumerated (and are closed under XOR).
pub fn max_query_error(query: QueryClass, diff: &[f64]) -> f64 {
    let prefix = || {
        diff.iter().scan(0.0, |acc, d| {
            *acc += d;
            Some(*acc)
        })
    };
    match (query.class, query.xor) {
        (ClassTag::Zero, _) => 0.0,
        (ClassTag::Point, false) => diff.iter().fold(0.0, |m, d| m.max(d.abs())),
        (ClassTag::Point, true) => {
            // f ⊕ g for f != g is the indicator of a pair {a, b}
            let mut sorted = diff.to_vec();
            sorted.sort_by(f64::total_cmp);
            let n = sorted.len();
            if n < 2 {
                return 0.0;
            }
            let top = sorted[n - 1] + sorted[n - 2];
            let bottom = sorted[0] + sorted[1];
            top.abs().max(bottom.abs())
        }
        (ClassTag::Thresh, false) => prefix().fold(0.0, |m, p: f64| m.max(p.abs())),
        (ClassTag::Thresh, true) => {
            // Thresh(a) ⊕ Thresh(b) is the interval (a, b]: a difference of prefix sums
            let (lo, hi) = prefix().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p), hi.max(p)));
            if lo.is_finite() { hi - lo } else { 0.0 }
        }
        (ClassTag::Parity, _) => (0..diff.len() as u32)
            .map(|a| {
                diff.iter()
                    .enumerate()
                    .filter(|(x, _)| (a & *x as u32).count_ones() & 1 == 1)
                    .map(|(_, d)| d)
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max),
    }
}

pub(crate) fn frequency_diff(d: &MultiLabeledDatabase, d_hat: &MultiLabeledDatabase) -> Result<Vec<f64>> {
    if d.universe() != d_hat.universe() {
        return Err(Error::UniverseMismatch {
            concept: "synthetic database".into(),
            reason: "databases live in different universes".into(),
        });
    }
    if d.is_empty() || d_hat.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let (n, m) = (d.n() as f64, d_hat.n() as f64);
    Ok(d.histogram()
        .iter()
        .zip(d_hat.histogram())
        .map(|(&a, b)| a as f64 / n - b as f64 / m)
        .collect())
}

/// The largest counting-query error of `d_hat` against `d` over the class.
pub fn sanitize_error(d: &MultiLabeledDatabase, d_hat: &MultiLabeledDatabase, query: QueryClass) -> Result<f64> {
    query.class.check_universe(d.universe())?;
    Ok(max_query_error(query, &frequency_diff(d, d_hat)?))
}
