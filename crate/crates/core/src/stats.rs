//! Streaming moment accumulators and batch-means confidence intervals.
//!
//! Simulation estimators here never store sample vectors: means and
//! variances accumulate via Welford updates, and the confidence interval
//! on the time-average age comes from batch means with a Student-t
//! critical value.

use serde::Serialize;

/// Numerically stable running mean/variance accumulator.
#[derive(Debug, Clone, Default)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.mean
        }
    }

    /// Unbiased sample variance; `NaN` below two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            f64::NAN
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn summary(&self) -> MomentSummary {
        MomentSummary {
            count: self.count,
            mean: self.mean(),
            variance: self.variance(),
        }
    }
}

/// Frozen view of a [`Welford`] accumulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
}

/// Two-sided 95% Student-t critical value via the Cornish-Fisher
/// expansion around the normal quantile; accurate to < 3e-4 absolute for
/// `df >= 9` and < 1e-5 for `df >= 29`, ample for confidence intervals
/// on batch means (simulations always use at least ten batches).
pub fn t_quantile_975(df: u64) -> f64 {
    let z = 1.959_963_984_540_054_f64; // Phi^-1(0.975)
    let v = df.max(1) as f64;
    let z2 = z * z;
    let g1 = z * (z2 + 1.0) / 4.0;
    let g2 = z * (5.0 * z2 * z2 + 16.0 * z2 + 3.0) / 96.0;
    let g3 = z * (3.0 * z2 * z2 * z2 + 19.0 * z2 * z2 + 17.0 * z2 - 15.0) / 384.0;
    z + g1 / v + g2 / (v * v) + g3 / (v * v * v)
}

/// Half-width of the 95% CI for the mean of `batch_means`
/// (`t * s / sqrt(B)`); `NaN` below two batches.
pub fn batch_ci_halfwidth(batch_means: &[f64]) -> f64 {
    if batch_means.len() < 2 {
        return f64::NAN;
    }
    let mut acc = Welford::new();
    for &b in batch_means {
        acc.push(b);
    }
    let b = batch_means.len() as f64;
    t_quantile_975(batch_means.len() as u64 - 1) * (acc.variance() / b).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_direct_formulas() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        let mut w = Welford::new();
        for &x in &xs {
            w.push(x);
        }
        assert_eq!(w.count(), 8);
        assert!((w.mean() - 5.0).abs() < 1e-15);
        // Sum of squared deviations = 32, n - 1 = 7.
        assert!((w.variance() - 32.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn welford_handles_large_offsets() {
        // Naive sum-of-squares cancels catastrophically here.
        let base = 1.0e9;
        let mut w = Welford::new();
        for x in [base + 4.0, base + 7.0, base + 13.0, base + 16.0] {
            w.push(x);
        }
        assert!((w.mean() - (base + 10.0)).abs() < 1e-5);
        assert!((w.variance() - 30.0).abs() < 1e-6);
    }

    #[test]
    fn welford_small_counts() {
        let mut w = Welford::new();
        assert!(w.mean().is_nan() && w.variance().is_nan());
        w.push(3.5);
        assert_eq!(w.mean(), 3.5);
        assert!(w.variance().is_nan());
    }

    #[test]
    fn t_quantile_matches_tables() {
        // Reference values from standard t tables (0.975 quantile).
        let cases = [(9, 2.2622), (19, 2.0930), (29, 2.0452), (59, 2.0010)];
        for (df, expect) in cases {
            let got = t_quantile_975(df);
            assert!(
                (got - expect).abs() < 5e-4,
                "df {df}: {got} vs table {expect}"
            );
        }
        // Huge df collapses to the normal quantile itself.
        let z = 1.959_963_984_540_054_f64;
        assert!((t_quantile_975(1_000_000_000) - z).abs() < 1e-8);
    }

    #[test]
    fn batch_ci_known_case() {
        // Ten batches 1..=10: sample variance 82.5/9, t_{0.975,9} ~ 2.2622.
        let means: Vec<f64> = (1..=10).map(f64::from).collect();
        let hw = batch_ci_halfwidth(&means);
        let expect = 2.262_157 * (82.5f64 / 9.0 / 10.0).sqrt();
        assert!((hw - expect).abs() < 1e-3, "{hw} vs {expect}");
        assert!(batch_ci_halfwidth(&[1.0]).is_nan());
    }
}
