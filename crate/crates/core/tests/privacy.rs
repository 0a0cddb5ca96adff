//! Exact privacy checks on neighbouring inputs.

use multilearn::mechanisms::{
    a_dist_output_probability, a_dist_threshold, dp_ratio_check, em_exact_distribution, privacy_loss_excess,
    ScoredCandidate,
};
use multilearn::sanitize::{answer_distribution, point_sanitizer_privacy_n};
use proptest::prelude::*;

fn candidates(scores: &[f64]) -> Vec<ScoredCandidate<usize>> {
    scores.iter().enumerate().map(|(i, &s)| ScoredCandidate::new(i, s)).collect()
}

proptest! {
    #[test]
    fn exponential_mechanism_is_pure_dp(
        base in proptest::collection::vec(-20i32..=0, 1..=64),
        shifts in proptest::collection::vec(-1i32..=1, 64),
        epsilon in 0.05f64..3.0,
    ) {
        let s: Vec<f64> = base.iter().map(|&v| v as f64).collect();
        let t: Vec<f64> = base.iter().zip(&shifts).map(|(&v, &d)| (v + d) as f64).collect();
        let p = em_exact_distribution(&candidates(&s), epsilon, 1.0).unwrap();
        let q = em_exact_distribution(&candidates(&t), epsilon, 1.0).unwrap();
        prop_assert!(dp_ratio_check(&p, &q, epsilon, 0.0).unwrap());
        prop_assert!(dp_ratio_check(&q, &p, epsilon, 0.0).unwrap());
    }
}

#[test]
fn exponential_mechanism_halved_epsilon_fails() {
    // near-tight: one candidate gains the sensitivity while 63 others lose it
    let s = [0.0; 64];
    let mut t = [-1.0; 64];
    t[0] = 1.0;
    let p = em_exact_distribution(&candidates(&s), 1.0, 1.0).unwrap();
    let q = em_exact_distribution(&candidates(&t), 1.0, 1.0).unwrap();
    assert!(dp_ratio_check(&q, &p, 1.0, 0.0).unwrap());
    assert!(!dp_ratio_check(&q, &p, 0.5, 0.0).unwrap());
}

/// Output pmf `[P(top), P(⊥)]` of stable selection for a given gap.
fn a_dist_pmf(gap: f64, epsilon: f64, delta: f64) -> [f64; 2] {
    let top = a_dist_output_probability(gap, epsilon, delta).unwrap();
    [top, 1.0 - top]
}

#[test]
fn a_dist_is_pure_when_the_gap_moves_by_one() {
    let (epsilon, delta) = (1.0, 0.01);
    for g in 0..40 {
        let (p, q) = (a_dist_pmf(g as f64, epsilon, delta), a_dist_pmf(g as f64 + 1.0, epsilon, delta));
        assert!(dp_ratio_check(&p, &q, epsilon, 0.0).unwrap() && dp_ratio_check(&q, &p, epsilon, 0.0).unwrap());
    }
}

#[test]
fn a_dist_privacy_profile_for_unit_sensitivity_scores() {
    // One changed row moves each score by at most 1, so the gap can move by 2
    // and the top solution can swap with the runner-up when the gap is at most 2.
    let (epsilon, delta) = (1.0, 0.01);
    let mut worst_fixed: f64 = 0.0;
    for g in 2..60 {
        let (p, q) = (a_dist_pmf(g as f64, epsilon, delta), a_dist_pmf(g as f64 - 2.0, epsilon, delta));
        worst_fixed = worst_fixed.max(privacy_loss_excess(&p, &q, epsilon).unwrap());
        assert!(dp_ratio_check(&p, &q, 2.0 * epsilon, 0.0).unwrap());
        assert!(dp_ratio_check(&q, &p, 2.0 * epsilon, 0.0).unwrap());
    }
    // at (ε, δ) the excess near the threshold is far above δ
    assert!(worst_fixed > 10.0 * delta);

    // swap: a top solution with gap <= 2 has no counterpart output on the neighbour
    let swap_mass = a_dist_output_probability(2.0, epsilon, delta).unwrap();
    assert!((swap_mass - 0.5 * delta * (2.0 * epsilon).exp()).abs() < 1e-12);
    assert!((a_dist_threshold(epsilon, delta) - 100f64.ln()).abs() < 1e-12);
}

#[test]
fn point_sanitizer_is_private_on_neighbours() {
    let (alpha, epsilon, delta) = (0.8, 2.0, 0.3);
    let n_min = point_sanitizer_privacy_n(alpha, epsilon, delta).unwrap();
    assert!(n_min <= 16);
    let bins = 64;
    let mut checked = 0;
    for n in n_min..=16 {
        // one row moves from x to y; only the two affected answers change
        for cx in 1..=n {
            for cy in 0..n - cx + 1 {
                let joint = |fx: usize, fy: usize| {
                    let px = answer_distribution(fx as f64 / n as f64, n, alpha, epsilon, bins);
                    let py = answer_distribution(fy as f64 / n as f64, n, alpha, epsilon, bins);
                    px.iter().flat_map(|a| py.iter().map(move |b| a * b)).collect::<Vec<f64>>()
                };
                let (p, q) = (joint(cx, cy), joint(cx - 1, cy + 1));
                assert!(dp_ratio_check(&p, &q, epsilon, delta).unwrap(), "n={n} cx={cx} cy={cy}");
                assert!(dp_ratio_check(&q, &p, epsilon, delta).unwrap(), "n={n} cx={cx} cy={cy}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn point_sanitizer_per_query_noise_has_half_the_budget() {
    // a single answer with frequency moved by 1/n above the cut-off is ε/2-private
    let (alpha, epsilon, n) = (0.2, 1.0, 100);
    let p = answer_distribution(0.5, n, alpha, epsilon, 200);
    let q = answer_distribution(0.51, n, alpha, epsilon, 200);
    assert!(dp_ratio_check(&p, &q, epsilon / 2.0, 0.0).unwrap());
    assert!(!dp_ratio_check(&p, &q, epsilon / 4.0, 0.0).unwrap());
}
