//! Malthusian parameter and closed-form limit laws.
//!
//! The inverse model's limits are driven by the unique root `λ*` of
//! `ρ̂(λ) = 1`, where `ρ̂(λ) = Σ_{n≥1} Π_{i=1}^{n} 1/(1 + iλ)` is the
//! expected Laplace transform of the rate-`1/k` pure birth point process.
//! From `λ*` the module derives the limiting degree pmf
//! `p̃_k = (kλ*/(kλ*+1)) Π_{i=1}^{k-1} 1/(iλ*+1)`, its tail, and the
//! size-biased attachment limits; the linear model's `2^{-k}` family is
//! provided alongside.

use statrs::function::gamma::ln_gamma;

use crate::error::{CoreError, CoreResult};

/// Product factors switch to log-space accumulation beyond this many terms
/// to avoid underflow.
const LOG_SPACE_THRESHOLD: u64 = 30;

/// A truncated series evaluation together with the number of terms used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms_used: usize,
}

/// Evaluates `ρ̂(λ)` with truncation error below `tol`.
///
/// Terms satisfy `term_n = term_{n-1} / (1 + nλ)`, so the remainder after
/// term `N` is bounded by the geometric tail `term_N / λ`; summation stops
/// at the first `N` where that bound drops below `tol`.
pub fn rho_hat(lambda: f64, tol: f64) -> CoreResult<SeriesValue> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(CoreError::InvalidParameter(format!(
            "rho_hat requires lambda > 0, got {lambda}"
        )));
    }
    if !(tol > 0.0) {
        return Err(CoreError::InvalidParameter(format!("rho_hat requires tol > 0, got {tol}")));
    }
    let mut term = 1.0_f64;
    let mut sum = 0.0_f64;
    let mut n = 0usize;
    loop {
        n += 1;
        term /= 1.0 + n as f64 * lambda;
        sum += term;
        if term / lambda < tol {
            return Ok(SeriesValue { value: sum, terms_used: n });
        }
        if n > 100_000_000 {
            return Err(CoreError::InvalidParameter(format!(
                "rho_hat series did not reach tolerance {tol} at lambda {lambda}"
            )));
        }
    }
}

/// The same series written as an explicit sum of partial products,
/// `Σ_{n=1}^{terms} Π_{i=1}^{n} 1/(1 + iλ)`; used to cross-check that the
/// incremental form above sums the identical series.
pub fn rho_hat_product_form(lambda: f64, terms: usize) -> f64 {
    let mut sum = 0.0;
    for n in 1..=terms {
        let mut prod = 1.0;
        for i in 1..=n {
            prod /= 1.0 + i as f64 * lambda;
        }
        sum += prod;
    }
    sum
}

/// Root of `ρ̂(λ) = 1` together with solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSolution {
    pub lambda_star: f64,
    /// `ρ̂` evaluated at the returned root (should be 1 up to tolerance).
    pub rho_hat_at_root: f64,
    /// Series terms used in the final evaluation.
    pub series_terms_used: usize,
    pub bisection_iterations: u32,
}

/// Solves `ρ̂(λ) = 1` by bisection so that `|ρ̂(λ) - 1| < tol`.
pub fn solve_lambda_star(tol: f64) -> CoreResult<LambdaSolution> {
    let series_tol = (tol * 1e-2).min(1e-12);
    solve_lambda_star_with(tol, series_tol)
}

/// Bisection with an explicit inner series tolerance, exposed so the
/// truncation-stability of the root can be tested directly.
pub fn solve_lambda_star_with(tol: f64, series_tol: f64) -> CoreResult<LambdaSolution> {
    if !(tol > 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "solve_lambda_star requires tol > 0, got {tol}"
        )));
    }
    let f = |lambda: f64| -> CoreResult<f64> { Ok(rho_hat(lambda, series_tol)?.value - 1.0) };

    // rho_hat is strictly decreasing, so a sign change brackets the root.
    let (mut lo, mut hi) = (0.1_f64, 2.0_f64);
    let mut widen = 0;
    while f(lo)? < 0.0 || f(hi)? > 0.0 {
        lo /= 2.0;
        hi *= 2.0;
        widen += 1;
        if widen > 20 {
            return Err(CoreError::BracketFailure { lo, hi });
        }
    }

    let mut iterations = 0u32;
    while hi - lo > tol.min(1e-11) && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let root = 0.5 * (lo + hi);
    let at_root = rho_hat(root, series_tol)?;
    Ok(LambdaSolution {
        lambda_star: root,
        rho_hat_at_root: at_root.value,
        series_terms_used: at_root.terms_used,
        bisection_iterations: iterations,
    })
}

/// Limiting degree laws for both model variants.
///
/// Inverse-model quantities are parameterized by `λ*`; the linear model's
/// limits are the fixed `2^{-k}` family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitDistribution {
    lambda_star: f64,
}

impl LimitDistribution {
    pub fn new(lambda_star: f64) -> CoreResult<Self> {
        if !(lambda_star > 0.0) || !lambda_star.is_finite() {
            return Err(CoreError::InvalidParameter(format!(
                "lambda_star must be positive, got {lambda_star}"
            )));
        }
        Ok(LimitDistribution { lambda_star })
    }

    /// Builds the distribution from a fresh solver run.
    pub fn from_solver(tol: f64) -> CoreResult<Self> {
        Ok(LimitDistribution { lambda_star: solve_lambda_star(tol)?.lambda_star })
    }

    pub fn lambda_star(&self) -> f64 {
        self.lambda_star
    }

    /// Limiting inverse-model pmf `p̃_k`.
    pub fn pmf(&self, k: u64) -> CoreResult<f64> {
        if k == 0 {
            return Err(CoreError::InvalidParameter("pmf index k must be >= 1".into()));
        }
        let kl = k as f64 * self.lambda_star;
        Ok(kl / (kl + 1.0) * self.tail(k))
    }

    /// Tail mass `Σ_{j≥n} p̃_j = Π_{i=1}^{n-1} 1/(1 + iλ*)`; `tail(1) = 1`.
    pub fn tail(&self, n: u64) -> f64 {
        if n <= LOG_SPACE_THRESHOLD {
            let mut prod = 1.0;
            for i in 1..n {
                prod /= 1.0 + i as f64 * self.lambda_star;
            }
            prod
        } else {
            let mut log_sum = 0.0;
            for i in 1..n {
                log_sum += (1.0 + i as f64 * self.lambda_star).ln();
            }
            (-log_sum).exp()
        }
    }

    /// The tail rewritten through the Gamma function:
    /// `λ^{-(n-1)} Γ(1 + 1/λ) / Γ(n + 1/λ)`.
    pub fn tail_gamma_form(&self, n: u64) -> f64 {
        let inv = 1.0 / self.lambda_star;
        let log_val = -((n as f64 - 1.0) * self.lambda_star.ln()) + ln_gamma(1.0 + inv)
            - ln_gamma(n as f64 + inv);
        log_val.exp()
    }

    /// Limiting probability that the next vertex attaches to a fixed vertex
    /// of current degree `k` (inverse model): `Π_{i=1}^{k} 1/(1 + iλ*)`.
    pub fn size_biased(&self, k: u64) -> f64 {
        self.tail(k + 1)
    }

    /// Limiting degree pmf of the linear model, `2^{-k}`.
    pub fn linear_pmf(k: u64) -> f64 {
        0.5_f64.powi(k as i32)
    }

    /// Linear-model size-biased attachment limit, also `2^{-k}`.
    pub fn linear_size_biased(k: u64) -> f64 {
        Self::linear_pmf(k)
    }

    /// Successive tail ratio `tail(n+1)/tail(n) = 1/(1 + nλ*)`; strictly
    /// decreasing to zero, which is the testable form of the
    /// faster-than-exponential tail decay.
    pub fn tail_ratio(&self, n: u64) -> f64 {
        1.0 / (1.0 + n as f64 * self.lambda_star)
    }

    /// Mean, mode, and mass diagnostics of the inverse-model pmf.
    pub fn summary(&self) -> LimitSummary {
        let mut mean = 0.0;
        let mut mass = 0.0;
        let mut mode = 1;
        let mut best = 0.0;
        let mut k = 1u64;
        loop {
            let p = self.pmf(k).expect("k >= 1");
            mean += k as f64 * p;
            mass += p;
            if p > best {
                best = p;
                mode = k;
            }
            if self.tail(k + 1) < 1e-14 {
                break;
            }
            k += 1;
        }
        LimitSummary { mean, mode, mass, terms: k }
    }
}

/// Numeric summary of the inverse-model limit distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSummary {
    pub mean: f64,
    pub mode: u64,
    /// Total pmf mass at the truncation point (should be 1).
    pub mass: f64,
    /// Terms summed before the tail dropped below the cutoff.
    pub terms: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Reference values computed independently with 50-digit arithmetic and
    // frozen here.
    const LAMBDA_STAR: f64 = 0.641923987771781;
    const RHO_HALF: f64 = 1.1945280494653251;
    const RHO_QUARTER: f64 = 1.8998265656072724;
    const RHO_TWO: f64 = 0.4106861346424480;
    const PMF_1: f64 = 0.39095840766838541;
    const PMF_2: f64 = 0.34236815397078804;
    const TAIL_2: f64 = 0.60904159233161459;
    const TAIL_3: f64 = 0.26667343836082655;
    const TAIL_4: f64 = 0.09114635101590253;

    #[test]
    fn rho_hat_at_one_is_e_minus_two() {
        let v = rho_hat(1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v.value, std::f64::consts::E - 2.0, epsilon = 1e-12);
    }

    #[test]
    fn rho_hat_matches_frozen_references() {
        assert_abs_diff_eq!(rho_hat(0.5, 1e-12).unwrap().value, RHO_HALF, epsilon = 1e-12);
        assert_abs_diff_eq!(rho_hat(0.25, 1e-12).unwrap().value, RHO_QUARTER, epsilon = 1e-11);
        assert_abs_diff_eq!(rho_hat(2.0, 1e-12).unwrap().value, RHO_TWO, epsilon = 1e-12);
    }

    #[test]
    fn rho_hat_rejects_bad_arguments() {
        assert!(rho_hat(0.0, 1e-12).is_err());
        assert!(rho_hat(-1.0, 1e-12).is_err());
        assert!(rho_hat(1.0, 0.0).is_err());
    }

    #[test]
    fn rho_hat_strictly_decreasing_on_grid() {
        let mut prev = f64::INFINITY;
        for i in 0..100 {
            let lambda = 0.1 + 1.9 * i as f64 / 99.0;
            let v = rho_hat(lambda, 1e-13).unwrap().value;
            assert!(v < prev, "rho_hat must decrease: lambda={lambda} value={v} prev={prev}");
            prev = v;
        }
    }

    #[test]
    fn incremental_and_product_forms_agree() {
        for i in 0..100 {
            let lambda = 0.1 + 1.9 * i as f64 / 99.0;
            let incremental = rho_hat(lambda, 1e-13).unwrap();
            let explicit = rho_hat_product_form(lambda, incremental.terms_used);
            assert_abs_diff_eq!(incremental.value, explicit, epsilon = 1e-14);
        }
    }

    #[test]
    fn lambda_star_matches_frozen_root() {
        let sol = solve_lambda_star(1e-12).unwrap();
        assert_abs_diff_eq!(sol.lambda_star, LAMBDA_STAR, epsilon = 1e-10);
        assert!((sol.rho_hat_at_root - 1.0).abs() < 2e-12, "root residue {}", sol.rho_hat_at_root);
        assert!(sol.series_terms_used > 10);
        assert!(sol.bisection_iterations > 0);
    }

    #[test]
    fn lambda_star_stable_under_truncation_refinement() {
        let coarse = solve_lambda_star_with(1e-12, 1e-12).unwrap().lambda_star;
        let fine = solve_lambda_star_with(1e-12, 1e-14).unwrap().lambda_star;
        assert!((coarse - fine).abs() < 1e-10, "coarse {coarse} vs fine {fine}");
    }

    #[test]
    fn solver_contract_residue_within_twice_tol() {
        for tol in [1e-6, 1e-9, 1e-12] {
            let sol = solve_lambda_star(tol).unwrap();
            assert!(
                (sol.rho_hat_at_root - 1.0).abs() <= 2.0 * tol,
                "tol {tol}: residue {}",
                sol.rho_hat_at_root - 1.0
            );
        }
    }

    fn dist() -> LimitDistribution {
        LimitDistribution::new(solve_lambda_star(1e-12).unwrap().lambda_star).unwrap()
    }

    #[test]
    fn pmf_matches_frozen_values() {
        let d = dist();
        assert_abs_diff_eq!(d.pmf(1).unwrap(), PMF_1, epsilon = 1e-12);
        assert_abs_diff_eq!(d.pmf(2).unwrap(), PMF_2, epsilon = 1e-12);
        assert_abs_diff_eq!(d.tail(2), TAIL_2, epsilon = 1e-12);
        assert_abs_diff_eq!(d.tail(3), TAIL_3, epsilon = 1e-12);
        assert_abs_diff_eq!(d.tail(4), TAIL_4, epsilon = 1e-12);
        assert!(d.pmf(0).is_err());
    }

    #[test]
    fn pmf_mass_mean_and_mode() {
        let s = dist().summary();
        assert_abs_diff_eq!(s.mass, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(s.mean, 2.0, epsilon = 1e-8);
        assert_eq!(s.mode, 1);
    }

    #[test]
    fn pmf_ratio_recurrence() {
        let d = dist();
        let l = d.lambda_star();
        for k in 1u64..=50 {
            let ratio = d.pmf(k + 1).unwrap() / d.pmf(k).unwrap();
            let expected = (k + 1) as f64 / (k as f64 * ((k + 1) as f64 * l + 1.0));
            assert_abs_diff_eq!(ratio, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn mode_one_iff_monotone_pmf() {
        let d = dist();
        // lambda* >= 1/2 makes the pmf nonincreasing from k = 1.
        assert!(d.lambda_star() >= 0.5);
        for k in 1u64..=60 {
            assert!(d.pmf(k + 1).unwrap() <= d.pmf(k).unwrap());
        }
    }

    #[test]
    fn tail_equals_pmf_partial_sums() {
        let d = dist();
        for n in 1u64..=20 {
            let mut sum = 0.0;
            let mut k = n;
            while d.tail(k) > 1e-16 {
                sum += d.pmf(k).unwrap();
                k += 1;
            }
            assert_abs_diff_eq!(d.tail(n), sum, epsilon = 1e-12);
        }
    }

    #[test]
    fn tail_matches_gamma_form() {
        let d = dist();
        for n in 1u64..=30 {
            let direct = d.tail(n);
            let gamma = d.tail_gamma_form(n);
            assert!(
                (direct - gamma).abs() <= 1e-10 * direct.max(1e-300),
                "n={n}: direct {direct} vs gamma-form {gamma}"
            );
        }
    }

    #[test]
    fn log_space_tail_is_continuous_at_threshold() {
        // The product and log-space branches must agree where they meet.
        let d = dist();
        let mut direct = 1.0;
        for i in 1..(LOG_SPACE_THRESHOLD + 5) {
            direct /= 1.0 + i as f64 * d.lambda_star();
            let tail = d.tail(i + 1);
            assert!((tail - direct).abs() <= 1e-12 * direct);
        }
    }

    #[test]
    fn size_biased_values_and_mass() {
        let d = dist();
        assert_abs_diff_eq!(d.size_biased(1), TAIL_2, epsilon = 1e-12);
        // The size-biased values sum to rho_hat(lambda*) = 1 by definition
        // of the Malthusian parameter.
        let mut sum = 0.0;
        let mut k = 1;
        while d.size_biased(k) > 1e-16 {
            sum += d.size_biased(k);
            k += 1;
        }
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-9);
        assert!(sum <= 1.0 + 1e-9);
    }

    #[test]
    fn tail_ratio_decreases_to_zero() {
        let d = dist();
        let mut prev = f64::INFINITY;
        for n in 1u64..=200 {
            let r = d.tail_ratio(n);
            assert!(r < prev && r > 0.0);
            prev = r;
        }
        assert!(d.tail_ratio(200) < 1e-2);
        // Frozen tenfold-decay reference: (1 + lambda*)/(1 + 10 lambda*).
        let tenfold = d.tail_ratio(10) / d.tail_ratio(1);
        assert_abs_diff_eq!(tenfold, 0.2213062274, epsilon = 1e-9);
    }

    #[test]
    fn linear_family() {
        assert_abs_diff_eq!(LimitDistribution::linear_pmf(1), 0.5, epsilon = 0.0);
        assert_abs_diff_eq!(LimitDistribution::linear_pmf(10), 1.0 / 1024.0, epsilon = 0.0);
        assert_eq!(LimitDistribution::linear_pmf(3), LimitDistribution::linear_size_biased(3));
        // 2 p_k = p_{k-1} + 1_{k=1} with p_0 = 0.
        assert_abs_diff_eq!(2.0 * LimitDistribution::linear_pmf(1), 1.0, epsilon = 0.0);
        for k in 2u64..=40 {
            assert_abs_diff_eq!(
                2.0 * LimitDistribution::linear_pmf(k),
                LimitDistribution::linear_pmf(k - 1),
                epsilon = 0.0
            );
        }
        // Partial sums are 1 - 2^{-K}.
        let partial: f64 = (1..=20).map(LimitDistribution::linear_pmf).sum();
        assert_abs_diff_eq!(partial, 1.0 - 0.5_f64.powi(20), epsilon = 1e-15);
    }

    #[test]
    fn constructors_reject_bad_lambda() {
        assert!(LimitDistribution::new(0.0).is_err());
        assert!(LimitDistribution::new(-0.5).is_err());
        assert!(LimitDistribution::new(f64::NAN).is_err());
    }
}
