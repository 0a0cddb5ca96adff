use rand::distributions::Open01;
use rand::Rng;

/// One draw from `Lap(scale)` by inverting the CDF of a single open-interval
/// uniform, so every sample consumes exactly one value from the stream.
pub fn laplace_sample<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    assert!(scale > 0.0 && scale.is_finite(), "Laplace scale must be positive, got {scale}");
    let u: f64 = rng.sample::<f64, _>(Open01) - 0.5;
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

/// `P[Lap(scale) <= t]`.
pub fn laplace_cdf(scale: f64, t: f64) -> f64 {
    if t < 0.0 {
        0.5 * (t / scale).exp()
    } else {
        1.0 - 0.5 * (-t / scale).exp()
    }
}

/// `P[Lap(scale) >= t]`.
pub fn laplace_upper_tail(scale: f64, t: f64) -> f64 {
    if t >= 0.0 {
        0.5 * (-t / scale).exp()
    } else {
        1.0 - 0.5 * (t / scale).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn same_seed_same_draws() {
        let a: Vec<f64> = {
            let mut r = stream(3, &[]);
            (0..16).map(|_| laplace_sample(2.0, &mut r)).collect()
        };
        let mut r = stream(3, &[]);
        let b: Vec<f64> = (0..16).map(|_| laplace_sample(2.0, &mut r)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn tail_at_scale_is_one_over_e() {
        let mut r = stream(11, &[]);
        let b = 0.7;
        let n = 1_000_000;
        let hits = (0..n).filter(|_| laplace_sample(b, &mut r).abs() > b).count();
        let freq = hits as f64 / n as f64;
        assert!((freq - (-1f64).exp()).abs() < 0.003, "tail frequency {freq}");
    }

    #[test]
    fn median_near_zero() {
        let mut r = stream(12, &[]);
        let mut v: Vec<f64> = (0..20_001).map(|_| laplace_sample(1.0, &mut r)).collect();
        v.sort_by(f64::total_cmp);
        // sd of the sample median of Lap(1) is about 1/sqrt(n) = 0.007
        assert!(v[10_000].abs() < 0.03);
    }

    #[test]
    fn cdf_and_tail_agree() {
        for t in [-3.0, -0.5, 0.0, 0.2, 4.0] {
            assert!((laplace_cdf(1.5, t) + laplace_upper_tail(1.5, t) - 1.0).abs() < 1e-15);
        }
    }
}
