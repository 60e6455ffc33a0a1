//! Statistical test helpers for the verification harness: goodness-of-fit
//! against an exact law, one-sample distance to the standard normal, and
//! basic sample summaries.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{CoreError, CoreResult};

/// Cells with expected count below this are merged with their neighbor
/// before computing the chi-square statistic, per the usual validity rule.
pub const MIN_EXPECTED_CELL: f64 = 5.0;

/// Outcome of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Number of cells after merging low-expectation cells.
    pub cells_used: usize,
    pub significance: f64,
    /// True when `p_value < significance`.
    pub rejected: bool,
}

/// Chi-square goodness-of-fit of observed category counts against exact
/// category probabilities (aligned by index). Adjacent cells are merged
/// until every cell's expected count reaches [`MIN_EXPECTED_CELL`].
pub fn chi_square_gof(
    observed: &[u64],
    expected_probs: &[f64],
    significance: f64,
) -> CoreResult<ChiSquareResult> {
    if observed.len() != expected_probs.len() || observed.is_empty() {
        return Err(CoreError::InvalidParameter(
            "observed counts and expected probabilities must align and be nonempty".into(),
        ));
    }
    if !(0.0..1.0).contains(&significance) || significance <= 0.0 {
        return Err(CoreError::InvalidParameter(format!(
            "significance must lie in (0, 1), got {significance}"
        )));
    }
    let prob_sum: f64 = expected_probs.iter().sum();
    if expected_probs.iter().any(|&p| !(p >= 0.0)) || (prob_sum - 1.0).abs() > 1e-6 {
        return Err(CoreError::InvalidParameter(format!(
            "expected probabilities must be nonnegative and sum to 1, got sum {prob_sum}"
        )));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(CoreError::InvalidParameter("no observations".into()));
    }

    // Greedy merge of adjacent cells until each bin's expectation clears
    // the floor; a short final bin folds into its predecessor.
    let mut bins: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    let mut acc_obs = 0.0;
    let mut acc_exp = 0.0;
    for (&o, &p) in observed.iter().zip(expected_probs) {
        acc_obs += o as f64;
        acc_exp += p * total as f64;
        if acc_exp >= MIN_EXPECTED_CELL {
            bins.push((acc_obs, acc_exp));
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    if acc_exp > 0.0 || acc_obs > 0.0 {
        if let Some(last) = bins.last_mut() {
            last.0 += acc_obs;
            last.1 += acc_exp;
        } else {
            bins.push((acc_obs, acc_exp));
        }
    }
    if bins.len() < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "only {} usable cell(s) after merging; need at least 2",
            bins.len()
        )));
    }

    let statistic: f64 = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let df = bins.len() - 1;
    let dist = ChiSquared::new(df as f64)
        .map_err(|e| CoreError::InvalidParameter(format!("chi-square df: {e}")))?;
    let p_value = dist.sf(statistic);
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom: df,
        p_value,
        cells_used: bins.len(),
        significance,
        rejected: p_value < significance,
    })
}

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and
/// the standard normal.
pub fn ks_distance_to_standard_normal(samples: &[f64]) -> CoreResult<f64> {
    if samples.is_empty() {
        return Err(CoreError::InvalidParameter("no samples".into()));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(CoreError::InvalidParameter("samples must be finite".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    let normal = Normal::new(0.0, 1.0).expect("standard normal parameters");
    let n = sorted.len() as f64;
    let mut distance = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = normal.cdf(x);
        distance = distance.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(distance)
}

/// Mean, dispersion, and range of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance; 0 for a single observation.
    pub variance: f64,
    pub std_dev: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    pub min: f64,
    pub max: f64,
}

impl SampleSummary {
    pub fn from_slice(samples: &[f64]) -> CoreResult<Self> {
        if samples.is_empty() {
            return Err(CoreError::InvalidParameter("no samples".into()));
        }
        let count = samples.len();
        let mean = samples.iter().sum::<f64>() / count as f64;
        let variance = if count > 1 {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count as f64 - 1.0)
        } else {
            0.0
        };
        let std_dev = variance.sqrt();
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &x in samples {
            min = min.min(x);
            max = max.max(x);
        }
        Ok(SampleSummary {
            count,
            mean,
            variance,
            std_dev,
            std_error: std_dev / (count as f64).sqrt(),
            min,
            max,
        })
    }
}

/// Empirical quantile by linear interpolation of the order statistics.
pub fn quantile(samples: &[f64], q: f64) -> CoreResult<f64> {
    if samples.is_empty() {
        return Err(CoreError::InvalidParameter("no samples".into()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(CoreError::InvalidParameter(format!("quantile must lie in [0, 1], got {q}")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    let pos = q * (sorted.len() as f64 - 1.0);
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Ok(sorted[lo] * (1.0 - frac) + sorted[hi] * frac)
}

/// Total variation distance between two probability vectors over the same
/// index set: half the L1 distance.
pub fn total_variation(p: &[f64], q: &[f64]) -> CoreResult<f64> {
    if p.len() != q.len() || p.is_empty() {
        return Err(CoreError::InvalidParameter("distributions must align and be nonempty".into()));
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn chi_square_two_cell_example() {
        // Observed [12, 8] against a fair split: statistic 0.8, df 1.
        let result = chi_square_gof(&[12, 8], &[0.5, 0.5], 0.05).unwrap();
        assert_abs_diff_eq!(result.statistic, 0.8, epsilon = 1e-12);
        assert_eq!(result.degrees_of_freedom, 1);
        assert_abs_diff_eq!(result.p_value, 0.3710934, epsilon = 1e-6);
        assert!(!result.rejected);
    }

    #[test]
    fn chi_square_perfect_fit() {
        let result = chi_square_gof(&[50, 50], &[0.5, 0.5], 0.05).unwrap();
        assert_abs_diff_eq!(result.statistic, 0.0);
        assert_abs_diff_eq!(result.p_value, 1.0);
    }

    #[test]
    fn chi_square_rejects_gross_misfit() {
        let result = chi_square_gof(&[900, 100], &[0.5, 0.5], 1e-4).unwrap();
        assert!(result.rejected);
        assert!(result.p_value < 1e-10);
    }

    #[test]
    fn chi_square_merges_sparse_cells() {
        // Tail cells with tiny expectation fold together.
        let observed = [480u64, 470, 30, 12, 5, 2, 1, 0];
        let probs = [0.48, 0.47, 0.03, 0.012, 0.005, 0.002, 0.0009, 0.0001];
        let result = chi_square_gof(&observed, &probs, 0.05).unwrap();
        assert!(result.cells_used < observed.len());
        assert_eq!(result.degrees_of_freedom, result.cells_used - 1);
        assert!(!result.rejected);
    }

    #[test]
    fn chi_square_input_validation() {
        assert!(chi_square_gof(&[1, 2], &[0.5], 0.05).is_err());
        assert!(chi_square_gof(&[], &[], 0.05).is_err());
        assert!(chi_square_gof(&[1, 2], &[0.9, 0.3], 0.05).is_err());
        assert!(chi_square_gof(&[1, 2], &[0.5, 0.5], 0.0).is_err());
        // All mass in one bin after merging.
        assert!(chi_square_gof(&[3, 2], &[0.5, 0.5], 0.05).is_err());
    }

    #[test]
    fn ks_distance_of_ideal_quantiles_is_small() {
        let normal = Normal::new(0.0, 1.0).unwrap();
        let n = 1000;
        let samples: Vec<f64> =
            (0..n).map(|i| normal.inverse_cdf((i as f64 + 0.5) / n as f64)).collect();
        let d = ks_distance_to_standard_normal(&samples).unwrap();
        assert!(d <= 0.5 / n as f64 + 1e-9, "d = {d}");
    }

    #[test]
    fn ks_distance_detects_location_shift() {
        let mut rng = crate::rng::replicate_rng(29, 0);
        let centered: Vec<f64> = (0..2000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let shifted: Vec<f64> = centered.iter().map(|x| x + 1.0).collect();
        assert!(ks_distance_to_standard_normal(&centered).unwrap() < 0.05);
        assert!(ks_distance_to_standard_normal(&shifted).unwrap() > 0.3);
        assert!(ks_distance_to_standard_normal(&[]).is_err());
        assert!(ks_distance_to_standard_normal(&[f64::NAN]).is_err());
    }

    #[test]
    fn sample_summary_small_case() {
        let s = SampleSummary::from_slice(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.count, 4);
        assert_abs_diff_eq!(s.mean, 2.5);
        assert_abs_diff_eq!(s.variance, 5.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.std_error, s.std_dev / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.min, 1.0);
        assert_abs_diff_eq!(s.max, 4.0);
        let single = SampleSummary::from_slice(&[7.0]).unwrap();
        assert_abs_diff_eq!(single.variance, 0.0);
        assert!(SampleSummary::from_slice(&[]).is_err());
    }

    #[test]
    fn quantile_interpolates_order_statistics() {
        let xs = [4.0, 1.0, 3.0, 2.0];
        assert_abs_diff_eq!(quantile(&xs, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(quantile(&xs, 1.0).unwrap(), 4.0);
        assert_abs_diff_eq!(quantile(&xs, 0.5).unwrap(), 2.5);
        assert!(quantile(&xs, 1.5).is_err());
    }

    #[test]
    fn total_variation_basics() {
        assert_abs_diff_eq!(
            total_variation(&[0.5, 0.5], &[0.5, 0.5]).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            total_variation(&[1.0, 0.0], &[0.0, 1.0]).unwrap(),
            1.0
        );
        assert!(total_variation(&[0.5], &[0.5, 0.5]).is_err());
    }
}
