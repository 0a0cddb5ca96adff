use std::collections::BTreeMap;

use rand::Rng;

use crate::domain::{DomainElement, MultiLabeledDatabase, Universe};
use crate::error::{open_unit, positive};
use crate::mechanisms::{laplace_cdf, laplace_sample, laplace_upper_tail};
use crate::{Error, Result};

/// Approximate point-query answers `a_x ∈ [0, 1]`; absent entries are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SanitizedAnswers {
    universe: Universe,
    answers: BTreeMap<DomainElement, f64>,
}

impl SanitizedAnswers {
    pub fn new(universe: Universe, mut answers: BTreeMap<DomainElement, f64>) -> Result<Self> {
        for (&x, &a) in &answers {
            universe.check(x)?;
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::param("answer", a, "must lie in [0, 1]"));
            }
        }
        answers.retain(|_, a| *a > 0.0);
        Ok(SanitizedAnswers { universe, answers })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn get(&self, x: DomainElement) -> f64 {
        self.answers.get(&x).copied().unwrap_or(0.0)
    }

    /// Elements with a non-zero released answer, in index order.
    pub fn support(&self) -> impl Iterator<Item = (DomainElement, f64)> + '_ {
        self.answers.iter().map(|(&x, &a)| (x, a))
    }

    pub fn support_size(&self) -> usize {
        self.answers.len()
    }

    /// `max_x |a_x - c_x(D)|` against a database's true frequencies.
    pub fn max_error(&self, d: &MultiLabeledDatabase) -> f64 {
        let n = d.n() as f64;
        d.histogram()
            .iter()
            .enumerate()
            .map(|(x, &c)| (self.get(DomainElement::new(x as u32)) - c as f64 / n).abs())
            .fold(0.0, f64::max)
    }
}

/// Point-query release. For every `x`:
///
/// 1. if `c_x(D) <= α/4`, release 0;
/// 2. otherwise draw `â_x = c_x(D) + Lap(2/(εn))`;
/// 3. release 0 if `â_x <= α/2`;
/// 4. else release `â_x`, clamped to `[0, 1]`.
///
/// Noise is drawn only for elements passing step 1, in index order.
pub fn sanitize_points<R: Rng + ?Sized>(
    d: &MultiLabeledDatabase,
    alpha: f64,
    epsilon: f64,
    delta: f64,
    rng: &mut R,
) -> Result<SanitizedAnswers> {
    open_unit("alpha", alpha)?;
    positive("epsilon", epsilon)?;
    open_unit("delta", delta)?;
    if d.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let n = d.n() as f64;
    let scale = 2.0 / (epsilon * n);
    let mut answers = BTreeMap::new();
    for (x, &count) in d.histogram().iter().enumerate() {
        let freq = count as f64 / n;
        if freq <= alpha / 4.0 {
            continue;
        }
        let noisy = freq + laplace_sample(scale, rng);
        if noisy > alpha / 2.0 {
            answers.insert(DomainElement::new(x as u32), noisy.min(1.0));
        }
    }
    Ok(SanitizedAnswers {
        universe: *d.universe(),
        answers,
    })
}

/// Smallest `n` at which the sub-threshold case of the privacy argument
/// holds, i.e. `½·exp(-εnα/8 + ε/2) <= δ/2`. Not enforced by
/// [`sanitize_points`].
pub fn point_sanitizer_privacy_n(alpha: f64, epsilon: f64, delta: f64) -> Result<usize> {
    open_unit("alpha", alpha)?;
    positive("epsilon", epsilon)?;
    open_unit("delta", delta)?;
    Ok((8.0 / (epsilon * alpha) * ((1.0 / delta).ln() + epsilon / 2.0)).ceil() as usize)
}

/// Pinned instantiation of the `O(log(1/αβδ)/(αε))` sample bound:
/// `⌈8 ln(16/(αβδ)) / (αε)⌉`.
pub fn point_sanitizer_accuracy_n(alpha: f64, beta: f64, epsilon: f64, delta: f64) -> Result<usize> {
    open_unit("alpha", alpha)?;
    open_unit("beta", beta)?;
    positive("epsilon", epsilon)?;
    open_unit("delta", delta)?;
    Ok((8.0 * (16.0 / (alpha * beta * delta)).ln() / (alpha * epsilon)).ceil() as usize)
}

/// Exact distribution of a single released answer `a_x`, discretized as
/// `[P(a=0), P(a ∈ (e_0,e_1]), …, P(a ∈ (e_{B-1}, 1)), P(a=1)]` with
/// `e_i = α/2 + i·(1 - α/2)/B`.
pub fn answer_distribution(freq: f64, n: usize, alpha: f64, epsilon: f64, bins: usize) -> Vec<f64> {
    let mut pmf = vec![0.0; bins + 2];
    if freq <= alpha / 4.0 {
        pmf[0] = 1.0;
        return pmf;
    }
    let scale = 2.0 / (epsilon * n as f64);
    let edge = |i: usize| alpha / 2.0 + i as f64 * (1.0 - alpha / 2.0) / bins as f64;
    pmf[0] = laplace_cdf(scale, alpha / 2.0 - freq);
    for i in 1..=bins {
        let hi = if i == bins {
            // the top cell is open at 1; the atom at 1 collects the clamped mass
            1.0 - laplace_upper_tail(scale, 1.0 - freq)
        } else {
            laplace_cdf(scale, edge(i) - freq)
        };
        pmf[i] = hi - laplace_cdf(scale, edge(i - 1) - freq);
    }
    pmf[bins + 1] = laplace_upper_tail(scale, 1.0 - freq);
    pmf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn db(u: Universe, xs: &[u32]) -> MultiLabeledDatabase {
        MultiLabeledDatabase::unlabeled(u, xs.iter().map(|&x| DomainElement::new(x)).collect()).unwrap()
    }

    #[test]
    fn all_distinct_small_frequencies_release_nothing() {
        let u = Universe::indexed(64).unwrap();
        let xs: Vec<u32> = (0..40).collect();
        let ans = sanitize_points(&db(u, &xs), 0.2, 1.0, 0.01, &mut stream(0, &[])).unwrap();
        assert_eq!(ans.support_size(), 0);
    }

    #[test]
    fn concentrated_database_recovers_full_mass() {
        let (alpha, beta, eps) = (0.2, 0.1, 1.0);
        let n = (8.0 * (2.0 / (alpha * beta) as f64).ln() / (eps * alpha)).ceil() as usize;
        let u = Universe::indexed(10).unwrap();
        let d = db(u, &vec![3; n]);
        let mut r = stream(4, &[]);
        let good = (0..400)
            .filter(|_| {
                let a = sanitize_points(&d, alpha, eps, 0.01, &mut r).unwrap();
                (a.get(DomainElement::new(3)) - 1.0).abs() <= alpha / 2.0
            })
            .count();
        assert!(good as f64 / 400.0 >= 1.0 - beta);
    }

    #[test]
    fn answers_are_clamped() {
        let u = Universe::indexed(4).unwrap();
        let d = db(u, &[1; 5]);
        let mut r = stream(8, &[]);
        for _ in 0..200 {
            let a = sanitize_points(&d, 0.5, 0.5, 0.1, &mut r).unwrap();
            assert!(a.support().all(|(_, v)| v > 0.25 && v <= 1.0));
        }
    }

    #[test]
    fn empty_database_is_an_error() {
        let u = Universe::indexed(4).unwrap();
        assert_eq!(
            sanitize_points(&db(u, &[]), 0.2, 1.0, 0.1, &mut stream(0, &[])),
            Err(Error::EmptyDatabase)
        );
    }

    #[test]
    fn answer_distribution_is_normalized() {
        for f in [0.01, 0.1, 0.5, 0.99, 1.0] {
            let p = answer_distribution(f, 20, 0.2, 1.0, 16);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|&q| q >= 0.0));
        }
        assert_eq!(answer_distribution(0.05, 20, 0.2, 1.0, 4)[0], 1.0);
    }

    #[test]
    fn privacy_n_helper() {
        let n = point_sanitizer_privacy_n(0.2, 1.0, 0.01).unwrap();
        let at = |n: usize| 0.5 * (-(n as f64) * 0.2 / 8.0 + 0.5).exp();
        assert!(at(n) <= 0.005 && at(n - 1) > 0.005);
    }
}
