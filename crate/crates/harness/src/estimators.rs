//! Experiment drivers: each takes a resolved configuration, runs the
//! replicates on independent streams, and folds the results into a typed
//! report.

use std::time::Instant;

use anyhow::{bail, Context, Result};
use depref_core::embed::{simulate_embedding, EmbeddingConfig, EmbeddingRecord};
use depref_core::graph::{grow, GrowConfig, GrowthRecord};
use depref_core::limits::LimitDistribution;
use depref_core::oracle::{DegreeExpectationTable, InitConvention};
use depref_core::stats::{ks_distance_to_standard_normal, SampleSummary};
use depref_core::ModelVariant;

use crate::config::ExperimentConfig;
use crate::report::{
    Aggregates, CltRow, EmbeddingRow, HistogramRow, NormalizerRow, Report, SizeBiasedRow,
    Statistic, TrackedDegreeRow, TrajectorySummaryRow,
};
use crate::run::run_replicates;
use crate::thresholds::ROOT_TOL;

/// Largest degree class given its own row in size-biased reports; the
/// remaining limit mass beyond it is negligible at report precision.
pub const SIZE_BIASED_REPORT_MAX_K: u64 = 16;

fn grow_config(config: &ExperimentConfig, record_draw: bool) -> GrowConfig {
    GrowConfig {
        variant: config.model,
        m: config.m,
        n_target: config.n,
        checkpoints: config.checkpoints.clone(),
        tracked_vertices: config.track.clone(),
        record_attachment_draw: record_draw,
    }
}

/// Runs the growth engine once per replicate.
pub fn grow_records(
    config: &ExperimentConfig,
    workers: usize,
    record_draw: bool,
) -> Result<Vec<GrowthRecord>> {
    let gc = grow_config(config, record_draw);
    run_replicates(config.replicates, config.seed, workers, move |_, rng| Ok(grow(&gc, rng)?))
}

/// Runs the continuous-time embedding once per replicate.
pub fn embedding_records(config: &ExperimentConfig, workers: usize) -> Result<Vec<EmbeddingRecord>> {
    if config.model != ModelVariant::Inverse {
        bail!("the continuous-time embedding is defined for the inverse model");
    }
    let ec = EmbeddingConfig {
        m: config.m,
        n_target: config.n,
        checkpoints: config.checkpoints.clone(),
        tracked_vertices: config.track.clone(),
    };
    run_replicates(config.replicates, config.seed, workers, move |_, rng| {
        Ok(simulate_embedding(&ec, rng)?)
    })
}

/// Raw tracked degrees: one row per replicate, checkpoint, and vertex.
pub fn run_grow(config: &ExperimentConfig, workers: usize) -> Result<Report> {
    let start = Instant::now();
    let records = grow_records(config, workers, false)?;
    let mut rows = Vec::new();
    for (replicate, record) in records.iter().enumerate() {
        for snap in &record.snapshots {
            for t in &snap.tracked {
                rows.push(TrackedDegreeRow {
                    replicate: replicate as u64,
                    n: snap.n,
                    vertex: t.vertex,
                    degree: t.degree,
                });
            }
        }
    }
    finish(Statistic::Trajectory, config, Aggregates::TrackedDegrees(rows), start)
}

/// Degree histograms: one row per replicate, checkpoint, and degree class.
pub fn run_degree_dist(config: &ExperimentConfig, workers: usize) -> Result<Report> {
    let start = Instant::now();
    let records = grow_records(config, workers, false)?;
    let mut rows = Vec::new();
    for (replicate, record) in records.iter().enumerate() {
        for snap in &record.snapshots {
            for &(degree_k, count) in &snap.histogram {
                rows.push(HistogramRow { replicate: replicate as u64, n: snap.n, degree_k, count });
            }
        }
    }
    finish(Statistic::DegreeDist, config, Aggregates::DegreeHistogram(rows), start)
}

/// Cross-replicate mean and variance of each tracked degree, with the
/// exact expectation and variance-bound columns for the linear model.
pub fn run_trajectory(config: &ExperimentConfig, workers: usize) -> Result<Report> {
    let start = Instant::now();
    let records = grow_records(config, workers, false)?;
    let mut rows = Vec::new();
    for &vertex in &config.track {
        let oracle = match config.model {
            ModelVariant::Linear => Some(
                DegreeExpectationTable::compute(
                    config.m,
                    vertex,
                    InitConvention::ConfigurationAccurate,
                    config.n,
                )
                .context("tabulating the expectation recursion")?,
            ),
            ModelVariant::Inverse => None,
        };
        for snap in &records[0].snapshots {
            let n = snap.n;
            let samples: Vec<f64> = records
                .iter()
                .filter_map(|r| {
                    r.snapshot_at(n)
                        .and_then(|s| s.tracked.iter().find(|t| t.vertex == vertex))
                        .map(|t| t.degree as f64)
                })
                .collect();
            if samples.len() != records.len() {
                continue; // vertex not alive at this checkpoint
            }
            let summary = SampleSummary::from_slice(&samples)?;
            rows.push(TrajectorySummaryRow {
                n,
                vertex,
                mean_degree: summary.mean,
                sample_variance: summary.variance,
                expected_degree: oracle
                    .as_ref()
                    .map(|t| t.expected_degree(n))
                    .transpose()
                    .context("expectation oracle lookup")?,
                variance_bound: oracle
                    .as_ref()
                    .map(|t| t.variance_bound(n))
                    .transpose()
                    .context("variance bound lookup")?,
                mean_over_log: summary.mean / (n as f64).ln(),
            });
        }
    }
    finish(Statistic::Trajectory, config, Aggregates::TrajectorySummary(rows), start)
}

/// Normalizer trajectory for the inverse model: mean of `D` and of `D/n`
/// per checkpoint, with the worst deviation from the limiting rate.
pub fn run_normalizer(config: &ExperimentConfig, workers: usize) -> Result<Report> {
    if config.model != ModelVariant::Inverse {
        bail!("the normalizer statistic is defined for the inverse model");
    }
    let start = Instant::now();
    let records = grow_records(config, workers, false)?;
    let rate = LimitDistribution::from_solver(ROOT_TOL)?.lambda_star();
    let mut rows = Vec::new();
    for snap in &records[0].snapshots {
        let n = snap.n;
        let values: Vec<f64> = records
            .iter()
            .filter_map(|r| r.snapshot_at(n).and_then(|s| s.normalizer))
            .collect();
        if values.is_empty() {
            continue;
        }
        let summary = SampleSummary::from_slice(&values)?;
        let max_abs_dev = values
            .iter()
            .map(|&d| (d / n as f64 - rate).abs())
            .fold(0.0f64, f64::max);
        rows.push(NormalizerRow {
            n,
            mean_normalizer: summary.mean,
            mean_ratio_to_n: summary.mean / n as f64,
            max_abs_dev_from_rate: max_abs_dev,
        });
    }
    finish(Statistic::Normalizer, config, Aggregates::NormalizerSummary(rows), start)
}

/// Standardized degree statistic for the linear model:
/// `(d_i(n) - m log n) / sqrt(m log n)`, with its distance from the
/// standard normal at each checkpoint.
pub fn run_clt(config: &ExperimentConfig, workers: usize) -> Result<Report> {
    if config.model == ModelVariant::Inverse {
        bail!(
            "the central limit statistic is defined for the linear model; \
             inverse-model degrees concentrate at law-of-large-numbers scale"
        );
    }
    let start = Instant::now();
    let records = grow_records(config, workers, false)?;
    let m = config.m as f64;
    let mut rows = Vec::new();
    for &vertex in &config.track {
        for snap in &records[0].snapshots {
            let n = snap.n;
            let scale = (m * (n as f64).ln()).sqrt();
            let values: Vec<f64> = records
                .iter()
                .filter_map(|r| {
                    r.snapshot_at(n)
                        .and_then(|s| s.tracked.iter().find(|t| t.vertex == vertex))
                        .map(|t| (t.degree as f64 - m * (n as f64).ln()) / scale)
                })
                .collect();
            if values.len() != records.len() {
                continue;
            }
            let summary = SampleSummary::from_slice(&values)?;
            rows.push(CltRow {
                n,
                vertex,
                replicates: values.len() as u64,
                ks_distance: ks_distance_to_standard_normal(&values)?,
                mean_statistic: summary.mean,
                sd_statistic: summary.std_dev,
            });
        }
    }
    finish(Statistic::Clt, config, Aggregates::CltSummary(rows), start)
}

/// Probability that the next attachment lands on a degree-`k` vertex, at
/// the final checkpoint, by two estimators:
///
/// * Rao-Blackwellized — the exact conditional probability
///   `N_k(n) * w_k` given the final state, averaged over replicates
///   (`w_k` is the per-vertex attachment probability at degree `k`);
/// * naive — the frequency of the realized first half-edge landing on a
///   degree-`k` vertex, one draw per replicate.
pub fn run_size_biased(config: &ExperimentConfig, workers: usize) -> Result<Report> {
    let start = Instant::now();
    let records = grow_records(config, workers, true)?;
    let limit = LimitDistribution::from_solver(ROOT_TOL)?;
    let n = config.n;
    let nf = n as f64;
    let reps = records.len() as f64;

    let mut rb = vec![0.0f64; SIZE_BIASED_REPORT_MAX_K as usize + 1];
    let mut naive = vec![0.0f64; SIZE_BIASED_REPORT_MAX_K as usize + 1];
    for record in &records {
        let snap = record
            .snapshot_at(n)
            .context("growth records always hold the target snapshot")?;
        for &(k, count) in &snap.histogram {
            if k > SIZE_BIASED_REPORT_MAX_K {
                continue;
            }
            let weight = match config.model {
                ModelVariant::Linear => {
                    let total = config.m as f64 * (2.0 * nf - 1.0);
                    (1.0 - k as f64 / total) / (nf - 1.0)
                }
                ModelVariant::Inverse => {
                    let d = snap.normalizer.context("inverse snapshots carry the normalizer")?;
                    (1.0 / k as f64) / d
                }
            };
            rb[k as usize] += count as f64 * weight / reps;
        }
        let draw = snap.attachment_draw.context("size-biased runs record the draw")?;
        if draw.target_degree <= SIZE_BIASED_REPORT_MAX_K {
            naive[draw.target_degree as usize] += 1.0 / reps;
        }
    }

    let mut rows = Vec::new();
    for k in 1..=SIZE_BIASED_REPORT_MAX_K {
        let limit_value = match config.model {
            ModelVariant::Linear => LimitDistribution::linear_size_biased(k),
            ModelVariant::Inverse => limit.size_biased(k),
        };
        rows.push(SizeBiasedRow {
            k,
            rao_blackwell: rb[k as usize],
            naive: naive[k as usize],
            limit_value,
            abs_dev: (rb[k as usize] - limit_value).abs(),
        });
    }
    finish(Statistic::SizeBiased, config, Aggregates::SizeBiasedSummary(rows), start)
}

/// Embedding arrivals: per replicate and checkpoint, the arrival time and
/// each tracked process count.
pub fn run_embed(config: &ExperimentConfig, workers: usize) -> Result<Report> {
    let start = Instant::now();
    let records = embedding_records(config, workers)?;
    let mut rows = Vec::new();
    for (replicate, record) in records.iter().enumerate() {
        for snap in &record.snapshots {
            for t in &snap.tracked {
                rows.push(EmbeddingRow {
                    replicate: replicate as u64,
                    n: snap.n,
                    tau_n: snap.tau,
                    vertex: t.vertex,
                    count: t.count,
                });
            }
        }
    }
    finish(Statistic::EmbeddingEquiv, config, Aggregates::EmbeddingArrivals(rows), start)
}

fn finish(
    statistic: Statistic,
    config: &ExperimentConfig,
    aggregates: Aggregates,
    start: Instant,
) -> Result<Report> {
    let mut report = Report::new(statistic, config.clone(), aggregates)?;
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}
