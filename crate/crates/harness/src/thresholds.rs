//! Every tolerance, replicate count, and fixed seed used by the
//! verification suite, in one place.
//!
//! The stochastic checks test true limit statements, but several assert
//! strict orderings whose gaps sit only a few standard errors above the
//! sampling noise, so the suite runs on one pinned master seed: the
//! expected behavior is what is being verified, the seed only removes the
//! few-percent chance of an unlucky draw. Change the seed and the suite is
//! still expected to pass with high probability.

/// Master seed for the verification suite; each check derives its own
/// stream family from this via [`crate::run::experiment_seed`].
pub const ACCEPTANCE_MASTER_SEED: u64 = 1;

/// Default master seed for CLI experiments when none is given.
pub const DEFAULT_SEED: u64 = 1;

// ---- exact-law equivalence (chi-square against enumeration) ----

/// Replicates for the goodness-of-fit comparison of both simulators
/// against the enumerated four-vertex law.
pub const EQUIV_REPLICATES: u64 = 1_000_000;
/// Significance for all goodness-of-fit rejections.
pub const EQUIV_SIGNIFICANCE: f64 = 1e-4;
/// Vertex count and half-edge count of the enumerated comparison law.
pub const EQUIV_N: usize = 4;
pub const EQUIV_M: u64 = 1;

// ---- sure normalizer bounds ----

/// The bound checks run at every attachment; this is how far a single
/// deterministic replicate grows for each half-edge count.
pub const BOUNDS_N: usize = 10_000;
pub const BOUNDS_M_VALUES: [u64; 3] = [1, 2, 3];

// ---- growth-rate series and limit distribution ----

/// |rho_hat(1) - (e - 2)| tolerance.
pub const SERIES_AT_ONE_TOL: f64 = 1e-12;
/// Root movement allowed when the series truncation is refined 100x.
pub const ROOT_REFINEMENT_TOL: f64 = 1e-10;
/// Baseline series truncation and root tolerances for reports.
pub const SERIES_TOL: f64 = 1e-12;
pub const ROOT_TOL: f64 = 1e-12;
/// Limit pmf mass and mean tolerances.
pub const PMF_MASS_TOL: f64 = 1e-10;
pub const PMF_MEAN_TOL: f64 = 1e-8;
/// Relative agreement of the gamma-function tail form with the direct
/// product, for indices up to `GAMMA_FORM_MAX_INDEX`.
pub const GAMMA_FORM_REL_TOL: f64 = 1e-10;
pub const GAMMA_FORM_MAX_INDEX: usize = 30;

// ---- linear-model degree distribution ----

pub const LINEAR_DIST_REPLICATES: u64 = 200;
pub const LINEAR_DIST_N: usize = 10_000;
/// max_k |mean proportion - 2^{-k}|.
pub const LINEAR_DIST_MAX_ABS_DEV: f64 = 0.01;
/// Monte Carlo means must sit within this many standard errors of the
/// exact expectation oracles.
pub const ORACLE_SE_MULTIPLIER: f64 = 4.0;
/// Degree classes enter the standard-error comparison only when the
/// pooled expected count across replicates reaches this, keeping the
/// normal approximation behind the multiplier honest.
pub const MIN_POOLED_COUNT: f64 = 25.0;

// ---- linear-model trajectory ----

/// Replicates for the mean/variance comparison at `TRAJECTORY_N`.
pub const TRAJECTORY_REPLICATES: u64 = 10_000;
pub const TRAJECTORY_N: usize = 1_000;
/// Sample variance may exceed the per-step variance bound by this
/// relative slack (variance estimator noise at these replicate counts is
/// about 1.5%).
pub const TRAJECTORY_VARIANCE_SLACK: f64 = 0.05;
/// Replicates and checkpoints for the `mean degree / log n` ratio path.
pub const RATIO_REPLICATES: u64 = 2_000;
pub const RATIO_CHECKPOINTS: [usize; 4] = [100, 1_000, 10_000, 100_000];
/// The ratio approaches 1 from above and keeps falling across the
/// checkpoints; the last value must sit inside (1, 1 + RATIO_FINAL_BAND).
pub const RATIO_FINAL_BAND: f64 = 0.15;
pub const TRAJECTORY_VERTEX: usize = 1;

// ---- linear-model central limit statistic ----

pub const CLT_REPLICATES: u64 = 2_000;
pub const CLT_CHECKPOINTS: [usize; 4] = [100, 1_000, 10_000, 100_000];
/// Kolmogorov-Smirnov distance to the standard normal at the final
/// checkpoint.  Convergence is logarithmic: centering at m ln n rather
/// than the exact recursion mean leaves a standardized offset of
/// (E d - m ln n)/sqrt(m ln n) ~ 0.23 at n = 1e5 for m = 2, which by
/// itself puts ~0.10 of KS distance between the finite-n law and the
/// limit, with skewness adding roughly half that again.  The bound
/// below that deterministic floor plus noise still rejects a
/// mis-standardized statistic, which lands at 0.4 or higher.
pub const CLT_FINAL_KS: f64 = 0.20;
/// Tracked vertex for the standardized statistic. Vertex 1's statistic
/// carries the initial-configuration bias (entry degree `2m`) visibly
/// past the final tolerance at these sizes; vertex 2 enters with degree
/// `m` and is the first vertex the limit statement covers cleanly.
pub const CLT_VERTEX: usize = 2;
pub const CLT_M_VALUES: [u64; 2] = [1, 2];

// ---- inverse-model limit family ----

pub const INVERSE_TV_REPLICATES: u64 = 100;
pub const INVERSE_N: usize = 50_000;
/// Total variation between the mean empirical degree proportions and the
/// limit pmf.
pub const INVERSE_TV_MAX: f64 = 0.02;
/// |mean normalizer / n - growth rate|.
pub const NORMALIZER_LIMIT_TOL: f64 = 0.02;
/// Relative band around sqrt(2/rate) for the mean of
/// `d_i(n)/sqrt(log n)`.
pub const INVERSE_MEAN_REL_TOL: f64 = 0.10;
pub const INVERSE_MEAN_REPLICATES: u64 = 500;
/// Tracked vertex: vertex 2 is the first entry-degree-`m` vertex, clear
/// of the ancestor's doubled starting degree.
pub const INVERSE_MEAN_VERTEX: usize = 2;
/// Relative band around `1/rate` for the arrival-time centering sequence
/// over `log n`, and its replicate count.
pub const CN_REL_TOL: f64 = 0.05;
pub const CN_REPLICATES: u64 = 100;
pub const CN_VERTEX: usize = 1;
/// Process count the centering-sequence embedding runs to.
pub const CN_N: usize = 100_000;

// ---- single birth process ----

pub const BIRTH_PATHS: u64 = 1_000;
pub const BIRTH_HORIZON: f64 = 100_000.0;
/// Relative band around sqrt(2) for the mean of `count/sqrt(t)`.
pub const BIRTH_SQRT2_REL_TOL: f64 = 0.02;
/// Paths and multiplier for the jump-time mean comparison up to
/// `ARRIVAL_MAX_INDEX`.
pub const ARRIVAL_PATHS: u64 = 100_000;
pub const ARRIVAL_SE_MULTIPLIER: f64 = 3.0;
pub const ARRIVAL_MAX_INDEX: usize = 100;
pub const ARRIVAL_M_VALUES: [u64; 2] = [1, 3];

// ---- size-biased attachment probabilities ----

/// Absolute tolerance for the Rao-Blackwellized estimator at k = 1, 2, 3.
pub const SIZE_BIASED_LINEAR_TOL: f64 = 0.01;
pub const SIZE_BIASED_INVERSE_TOL: f64 = 0.02;
pub const SIZE_BIASED_KS: [u64; 3] = [1, 2, 3];
/// The single-draw estimator must agree with the Rao-Blackwellized one
/// within this many binomial standard errors.
pub const NAIVE_CROSS_CHECK_SE: f64 = 4.0;

// ---- inverse-model tightness ----

pub const TIGHTNESS_REPLICATES: u64 = 2_000;
pub const TIGHTNESS_M_VALUES: [u64; 2] = [2, 3];
pub const TIGHTNESS_N_SMALL: usize = 1_000;
pub const TIGHTNESS_N_LARGE: usize = 10_000;
pub const TIGHTNESS_QUANTILE_LO: f64 = 0.01;
pub const TIGHTNESS_QUANTILE_HI: f64 = 0.99;
/// Relative movement allowed in each scaled quantile between the two
/// sizes.
pub const TIGHTNESS_BAND_DRIFT: f64 = 0.20;
/// Hard range the scaled band must stay inside.
pub const TIGHTNESS_SCALE_FLOOR: f64 = 0.1;
pub const TIGHTNESS_SCALE_CEIL: f64 = 4.0;
pub const TIGHTNESS_VERTEX: usize = 1;

// ---- determinism ----

pub const DETERMINISM_WORKER_COUNTS: [usize; 2] = [1, 4];
pub const DETERMINISM_REPLICATES: u64 = 50;
pub const DETERMINISM_N: usize = 2_000;
