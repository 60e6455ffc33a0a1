//! Continuous-time embedding of the inverse model, plus the single pure
//! birth process it is built from.
//!
//! Each vertex carries a counting process started at `m` whose birth rate
//! is the reciprocal of its current count. Running all processes as a
//! superposition — exponential waits at total rate `Σ 1/count_j`, the
//! receiving process chosen proportionally to `1/count_j` — and adding a
//! fresh process at every `m`-th birth reproduces the discrete model: the
//! jump chain of the counts is exactly the degree sequence chain.
//!
//! The construction starts from a single ancestor process at time 0; the
//! second vertex arrives at the ancestor's `m`-th birth, at which point the
//! counts are `[2m, m]` — the discrete initial configuration.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{CoreError, CoreResult};
use crate::fenwick::WeightIndex;

/// Incremental weight updates are recomputed after this many births to
/// shed floating-point drift (same cadence as the discrete engine).
const WEIGHT_REFRESH_INTERVAL: u64 = 1 << 16;

/// One path of a single birth process: count starts at `m`, the wait
/// before the `j`-th birth is exponential with mean `m + j - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BirthProcessPath {
    pub m: u64,
    /// `jump_times[j]` is the time of the `(j+1)`-th birth.
    pub jump_times: Vec<f64>,
}

impl BirthProcessPath {
    /// Process count at time `t`: `m` plus the number of births by `t`.
    pub fn count_at(&self, t: f64) -> u64 {
        self.m + self.jump_times.partition_point(|&s| s <= t) as u64
    }
}

/// Simulates `births` jumps of the single process.
pub fn simulate_birth_process<R: Rng + ?Sized>(
    m: u64,
    births: usize,
    rng: &mut R,
) -> CoreResult<BirthProcessPath> {
    if m == 0 {
        return Err(CoreError::InvalidParameter("m must be >= 1".into()));
    }
    let mut jump_times = Vec::with_capacity(births);
    let mut t = 0.0;
    for j in 0..births as u64 {
        let mean = (m + j) as f64;
        let e: f64 = Exp1.sample(rng);
        t += e * mean;
        jump_times.push(t);
    }
    Ok(BirthProcessPath { m, jump_times })
}

/// Runs the single process until its path covers time `horizon` and
/// returns the count at that time.
pub fn birth_process_count_at<R: Rng + ?Sized>(
    m: u64,
    horizon: f64,
    rng: &mut R,
) -> CoreResult<u64> {
    if m == 0 {
        return Err(CoreError::InvalidParameter("m must be >= 1".into()));
    }
    if !(horizon >= 0.0) {
        return Err(CoreError::InvalidParameter(format!("horizon must be >= 0, got {horizon}")));
    }
    let mut count = m;
    let mut t = 0.0;
    loop {
        let e: f64 = Exp1.sample(rng);
        t += e * count as f64;
        if t > horizon {
            return Ok(count);
        }
        count += 1;
    }
}

/// Expected time of the `births`-th jump: the waits have means
/// `m, m+1, ..., m+births-1`, so the sum is `births·m + births(births-1)/2`.
pub fn expected_jump_time(m: u64, births: u64) -> f64 {
    births as f64 * m as f64 + (births as f64) * (births as f64 - 1.0) / 2.0
}

/// Configuration for [`simulate_embedding`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingConfig {
    pub m: u64,
    /// Number of vertex arrivals to simulate (including the ancestor).
    pub n_target: usize,
    /// Vertex counts at which snapshots are recorded; the target itself is
    /// always included.
    pub checkpoints: Vec<usize>,
    pub tracked_vertices: Vec<usize>,
}

impl EmbeddingConfig {
    pub fn new(m: u64, n_target: usize) -> Self {
        EmbeddingConfig { m, n_target, checkpoints: Vec::new(), tracked_vertices: vec![1] }
    }
}

/// Count of one tracked process at a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrackedCount {
    pub vertex: usize,
    pub count: u64,
}

/// State summary at a vertex arrival.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSnapshot {
    pub n: usize,
    /// Arrival time of the `n`-th vertex.
    pub tau: f64,
    pub tracked: Vec<TrackedCount>,
    /// Total birth rate `Σ 1/count_j` just after the arrival.
    pub weight_sum: f64,
}

/// Full output of one embedding run.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRecord {
    pub m: u64,
    pub n_target: usize,
    /// `arrival_times[i]` is the arrival time of vertex `i+1`; the
    /// ancestor's is 0.
    pub arrival_times: Vec<f64>,
    /// `step_means[i]` is the sum of the `m` conditional mean waits spent
    /// going from `i+1` to `i+2` vertices; surely within
    /// `[m²/n, 2m²/n]` for `n = i+1`.
    pub step_means: Vec<f64>,
    pub snapshots: Vec<EmbeddingSnapshot>,
    /// Counts of all processes at the final arrival.
    pub final_counts: Vec<u64>,
}

impl EmbeddingRecord {
    pub fn snapshot_at(&self, n: usize) -> Option<&EmbeddingSnapshot> {
        self.snapshots.iter().find(|s| s.n == n)
    }

    /// Cumulative step means seen by vertex `i`: pairs `(n, c_n)` with
    /// `c_n = Σ_{j=i}^{n} step_means[j-1]`, the centering sequence for the
    /// arrival-time gap `τ_n - τ_i`. For `m = 1` it grows like
    /// `(1/λ*) log n` with `λ*` the growth rate from [`crate::limits`].
    pub fn cumulative_step_means(&self, vertex: usize) -> CoreResult<Vec<(usize, f64)>> {
        if vertex == 0 || vertex > self.step_means.len() {
            return Err(CoreError::VertexOutOfRange { vertex, n: self.step_means.len() });
        }
        let mut acc = 0.0;
        Ok((vertex..=self.step_means.len())
            .map(|n| {
                acc += self.step_means[n - 1];
                (n, acc)
            })
            .collect())
    }
}

/// Simulates the superposition until `n_target` vertices have arrived.
pub fn simulate_embedding<R: Rng + ?Sized>(
    config: &EmbeddingConfig,
    rng: &mut R,
) -> CoreResult<EmbeddingRecord> {
    if config.m == 0 {
        return Err(CoreError::InvalidParameter("m must be >= 1".into()));
    }
    if config.n_target < 2 {
        return Err(CoreError::InvalidParameter("n_target must be >= 2".into()));
    }
    let mut checkpoints = config.checkpoints.clone();
    checkpoints.push(config.n_target);
    checkpoints.sort_unstable();
    checkpoints.dedup();
    for &cp in &checkpoints {
        if cp < 2 || cp > config.n_target {
            return Err(CoreError::CheckpointBeyondTarget {
                checkpoint: cp,
                n_target: config.n_target,
            });
        }
    }

    let m = config.m;
    let mut counts: Vec<u64> = vec![m];
    let mut total_count = m;
    let mut weights = WeightIndex::with_capacity(16);
    weights.push(1.0 / m as f64);
    let mut t = 0.0;
    let mut arrival_times = vec![0.0];
    let mut step_means = Vec::with_capacity(config.n_target - 1);
    let mut snapshots = Vec::with_capacity(checkpoints.len());
    let mut next_cp = 0usize;
    let mut births_in_step = 0u64;
    let mut step_mean_acc = 0.0;
    let mut births_since_refresh = 0u64;

    while counts.len() < config.n_target {
        let rate = weights.total();
        check_rate_bounds(m, counts.len(), rate)?;
        step_mean_acc += 1.0 / rate;
        let e: f64 = Exp1.sample(rng);
        t += e / rate;
        let j = weights.sample(rng);
        counts[j] += 1;
        total_count += 1;
        weights.set(j, 1.0 / counts[j] as f64);
        births_since_refresh += 1;
        if births_since_refresh >= WEIGHT_REFRESH_INTERVAL {
            for (i, &c) in counts.iter().enumerate() {
                weights.set(i, 1.0 / c as f64);
            }
            weights.rebuild();
            births_since_refresh = 0;
        }
        births_in_step += 1;
        if births_in_step == m {
            births_in_step = 0;
            step_means.push(step_mean_acc);
            step_mean_acc = 0.0;
            counts.push(m);
            total_count += m;
            weights.push(1.0 / m as f64);
            arrival_times.push(t);
            let n = counts.len();
            debug_assert_eq!(total_count, m * (2 * n as u64 - 1));
            if next_cp < checkpoints.len() && n == checkpoints[next_cp] {
                debug_assert_eq!(counts.iter().sum::<u64>(), total_count);
                let tracked = config
                    .tracked_vertices
                    .iter()
                    .filter(|&&v| v >= 1 && v <= n)
                    .map(|&v| TrackedCount { vertex: v, count: counts[v - 1] })
                    .collect();
                snapshots.push(EmbeddingSnapshot { n, tau: t, tracked, weight_sum: weights.total() });
                next_cp += 1;
            }
        }
    }

    // Step-mean bounds are sure statements; verify the whole path.
    for (i, &b) in step_means.iter().enumerate() {
        let n = (i + 1) as f64;
        let m2 = (m * m) as f64;
        if b < m2 / n - 1e-9 || b > 2.0 * m2 / n + 1e-9 {
            return Err(CoreError::NormalizerBound {
                n: i + 1,
                detail: format!("step mean {b} outside [{}, {}]", m2 / n, 2.0 * m2 / n),
            });
        }
    }

    Ok(EmbeddingRecord {
        m,
        n_target: config.n_target,
        arrival_times,
        step_means,
        snapshots,
        final_counts: counts,
    })
}

/// With `n` processes all of count at least `m` and total count
/// `< 2mn`, the total rate surely lies in `[n/(2m), n/m]`. The bounds can
/// be attained exactly, so the check leaves relative room for the float
/// sum's drift.
fn check_rate_bounds(m: u64, n: usize, rate: f64) -> CoreResult<()> {
    let lo = n as f64 / (2.0 * m as f64);
    let hi = n as f64 / m as f64;
    if rate < lo * (1.0 - 1e-9) || rate > hi * (1.0 + 1e-9) {
        return Err(CoreError::NormalizerBound {
            n,
            detail: format!("rate {rate} outside [{lo}, {hi}]"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replicate_rng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn expected_jump_times_closed_form() {
        assert_abs_diff_eq!(expected_jump_time(1, 2), 3.0);
        assert_abs_diff_eq!(expected_jump_time(1, 99), 4950.0);
        assert_abs_diff_eq!(expected_jump_time(3, 2), 7.0);
        assert_abs_diff_eq!(expected_jump_time(3, 99), 5148.0);
    }

    #[test]
    fn birth_process_path_structure() {
        let mut rng = replicate_rng(3, 0);
        let path = simulate_birth_process(2, 50, &mut rng).unwrap();
        assert_eq!(path.jump_times.len(), 50);
        assert!(path.jump_times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(path.count_at(0.0), 2);
        assert_eq!(path.count_at(path.jump_times[0]), 3);
        assert_eq!(path.count_at(f64::INFINITY), 52);
        assert!(simulate_birth_process(0, 5, &mut rng).is_err());
    }

    #[test]
    fn birth_process_mean_jump_time() {
        // Mean of T_10 (9 births) over many paths vs the closed form.
        let reps = 20_000;
        let mut total = 0.0;
        for r in 0..reps {
            let mut rng = replicate_rng(41, r);
            let path = simulate_birth_process(1, 9, &mut rng).unwrap();
            total += *path.jump_times.last().unwrap();
        }
        let mean = total / reps as f64;
        let expected = expected_jump_time(1, 9); // 45
        // Var(T_10) = sum of squared means = 285, so SE ~ 0.12.
        assert_abs_diff_eq!(mean, expected, epsilon = 0.5);
    }

    #[test]
    fn count_at_horizon_matches_path_simulation() {
        let horizon = 200.0;
        let mut rng_a = replicate_rng(5, 7);
        let count = birth_process_count_at(1, horizon, &mut rng_a).unwrap();
        let mut rng_b = replicate_rng(5, 7);
        let path = simulate_birth_process(1, 60, &mut rng_b).unwrap();
        assert_eq!(count, path.count_at(horizon));
    }

    #[test]
    fn embedding_initial_step_matches_configuration() {
        let mut cfg = EmbeddingConfig::new(3, 2);
        cfg.tracked_vertices = vec![1, 2];
        let rec = simulate_embedding(&cfg, &mut replicate_rng(9, 0)).unwrap();
        // After the ancestor's m births the counts are [2m, m].
        assert_eq!(rec.final_counts, vec![6, 3]);
        assert_eq!(rec.arrival_times[0], 0.0);
        assert!(rec.arrival_times[1] > 0.0);
        // The first step's conditional means are deterministic:
        // m + (m+1) + ... + (2m-1).
        assert_abs_diff_eq!(rec.step_means[0], 3.0 + 4.0 + 5.0, epsilon = 1e-12);
    }

    #[test]
    fn embedding_count_sum_and_monotone_arrivals() {
        let cfg = EmbeddingConfig::new(2, 200);
        let rec = simulate_embedding(&cfg, &mut replicate_rng(11, 4)).unwrap();
        let total: u64 = rec.final_counts.iter().sum();
        assert_eq!(total, 2 * (2 * 200 - 1));
        assert!(rec.arrival_times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(rec.arrival_times.len(), 200);
        assert_eq!(rec.step_means.len(), 199);
        assert!(rec.final_counts.iter().all(|&c| c >= 2));
    }

    #[test]
    fn embedding_step_means_within_sure_bounds() {
        for m in [1u64, 2, 3] {
            let cfg = EmbeddingConfig::new(m, 500);
            let rec = simulate_embedding(&cfg, &mut replicate_rng(13, m)).unwrap();
            for (i, &b) in rec.step_means.iter().enumerate() {
                let n = (i + 1) as f64;
                let m2 = (m * m) as f64;
                assert!(b >= m2 / n && b <= 2.0 * m2 / n, "m={m} n={n} b={b}");
            }
        }
    }

    #[test]
    fn embedding_mean_first_arrival() {
        // E[tau_2] = b_1 = m^2 + m(m-1)/2 exactly; check m = 2 (b_1 = 5).
        let reps = 20_000;
        let mut total = 0.0;
        let cfg = EmbeddingConfig::new(2, 2);
        for r in 0..reps {
            let rec = simulate_embedding(&cfg, &mut replicate_rng(17, r)).unwrap();
            total += rec.arrival_times[1];
        }
        // Var = 2^2 + 3^2 = 13, SE ~ 0.026.
        assert_abs_diff_eq!(total / reps as f64, 5.0, epsilon = 0.11);
    }

    #[test]
    fn embedding_snapshots_and_cumulative_means() {
        let mut cfg = EmbeddingConfig::new(1, 300);
        cfg.checkpoints = vec![10, 100];
        cfg.tracked_vertices = vec![1, 2];
        let rec = simulate_embedding(&cfg, &mut replicate_rng(19, 2)).unwrap();
        assert_eq!(rec.snapshots.len(), 3);
        let snap = rec.snapshot_at(100).unwrap();
        assert_eq!(snap.tracked.len(), 2);
        assert!(snap.tau <= rec.arrival_times[299]);
        assert_abs_diff_eq!(snap.tau, rec.arrival_times[99], epsilon = 0.0);

        let c = rec.cumulative_step_means(1).unwrap();
        assert_eq!(c.first().unwrap().0, 1);
        assert_eq!(c.last().unwrap().0, 299);
        assert_abs_diff_eq!(c[0].1, rec.step_means[0], epsilon = 0.0);
        let direct: f64 = rec.step_means.iter().sum();
        assert_abs_diff_eq!(c.last().unwrap().1, direct, epsilon = 1e-9);
        // Starting at vertex 2 drops b_1.
        let c2 = rec.cumulative_step_means(2).unwrap();
        assert_abs_diff_eq!(c2[0].1, rec.step_means[1], epsilon = 0.0);
        assert!(rec.cumulative_step_means(0).is_err());
    }

    #[test]
    fn embedding_is_deterministic_per_seed() {
        let cfg = EmbeddingConfig::new(2, 100);
        let a = simulate_embedding(&cfg, &mut replicate_rng(23, 1)).unwrap();
        let b = simulate_embedding(&cfg, &mut replicate_rng(23, 1)).unwrap();
        assert_eq!(a, b);
        let c = simulate_embedding(&cfg, &mut replicate_rng(23, 2)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn embedding_rejects_bad_configs() {
        let mut cfg = EmbeddingConfig::new(1, 10);
        cfg.checkpoints = vec![11];
        assert!(matches!(
            simulate_embedding(&cfg, &mut replicate_rng(1, 0)),
            Err(CoreError::CheckpointBeyondTarget { .. })
        ));
        assert!(simulate_embedding(&EmbeddingConfig::new(0, 10), &mut replicate_rng(1, 0)).is_err());
        assert!(simulate_embedding(&EmbeddingConfig::new(1, 1), &mut replicate_rng(1, 0)).is_err());
    }
}
