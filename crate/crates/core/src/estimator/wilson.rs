/// Wilson score interval for `successes` out of `trials` at normal quantile
/// `z`, clamped to `[0, 1]`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials >= 1, "wilson interval needs at least one trial");
    assert!(successes <= trials, "more successes than trials");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Center of the Wilson interval.
pub fn wilson_center(successes: u64, trials: u64, z: f64) -> f64 {
    let n = trials as f64;
    let z2 = z * z;
    (successes as f64 / n + z2 / (2.0 * n)) / (1.0 + z2 / n)
}

/// Binomial standard error `sqrt(p(1-p)/n)` at the point estimate.
pub fn binomial_se(successes: u64, trials: u64) -> f64 {
    let n = trials as f64;
    let p = successes as f64 / n;
    (p * (1.0 - p) / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_successes_closed_form() {
        let (lo, hi) = wilson_interval(0, 100, 1.96);
        assert_eq!(lo, 0.0);
        let want = 1.96f64.powi(2) / (100.0 + 1.96f64.powi(2));
        assert!((hi - want).abs() < 1e-15);
        assert!((hi - 0.0370).abs() < 5e-5);
    }

    #[test]
    fn half_is_symmetric() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!((0.5 - lo - (hi - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn paper_scale_rebit_retrit_interval() {
        let (lo, hi) = wilson_interval(6_192_047, 800_000_000, 1.96);
        let half = (hi - lo) / 2.0;
        assert!((half - 6.1e-6).abs() < 0.1e-6, "half-width {half:e}");
        assert!(lo < 0.00774 && 0.00774 < hi);
    }

    #[test]
    fn all_successes_reaches_one() {
        let (lo, hi) = wilson_interval(10, 10, 1.96);
        assert_eq!(hi, 1.0);
        assert!(lo < 1.0);
    }

    proptest! {
        #[test]
        fn interval_brackets_center(trials in 1u64..1_000_000, frac in 0.0f64..=1.0, z in 0.1f64..6.0) {
            let successes = ((trials as f64) * frac).floor() as u64;
            let (lo, hi) = wilson_interval(successes, trials, z);
            let c = wilson_center(successes, trials, z);
            prop_assert!(0.0 <= lo && lo <= c + 1e-15 && c <= hi + 1e-15 && hi <= 1.0);
        }
    }
}
