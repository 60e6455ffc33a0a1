//! Experiment reports: typed aggregate rows plus the provenance needed to
//! reproduce them, serializable to JSON and flattenable to CSV.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use depref_core::limits::solve_lambda_star;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::thresholds::ROOT_TOL;

/// What an experiment measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Trajectory,
    DegreeDist,
    SizeBiased,
    Clt,
    EmbeddingEquiv,
    Normalizer,
}

/// The growth-rate constant and how its defining series was evaluated;
/// echoed in every report and emitted verbatim by the solver subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnostics {
    pub lambda_star: f64,
    pub rho_hat_at_root: f64,
    pub series_terms_used: usize,
}

impl SeriesDiagnostics {
    pub fn solve(tol: f64) -> Result<Self> {
        let solution = solve_lambda_star(tol).context("solving for the growth rate")?;
        Ok(SeriesDiagnostics {
            lambda_star: solution.lambda_star,
            rho_hat_at_root: solution.rho_hat_at_root,
            series_terms_used: solution.series_terms_used,
        })
    }
}

/// Tracked degree of one vertex in one replicate at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackedDegreeRow {
    pub replicate: u64,
    pub n: usize,
    pub vertex: usize,
    pub degree: u64,
}

/// One degree-histogram cell in one replicate at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub replicate: u64,
    pub n: usize,
    pub degree_k: u64,
    pub count: u64,
}

/// Cross-replicate degree summary at one checkpoint, with the exact
/// oracle columns where the model has them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummaryRow {
    pub n: usize,
    pub vertex: usize,
    pub mean_degree: f64,
    pub sample_variance: f64,
    pub expected_degree: Option<f64>,
    pub variance_bound: Option<f64>,
    pub mean_over_log: f64,
}

/// Cross-replicate normalizer summary at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizerRow {
    pub n: usize,
    pub mean_normalizer: f64,
    pub mean_ratio_to_n: f64,
    pub max_abs_dev_from_rate: f64,
}

/// Distance of the standardized degree statistic from the standard
/// normal at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltRow {
    pub n: usize,
    pub vertex: usize,
    pub replicates: u64,
    pub ks_distance: f64,
    pub mean_statistic: f64,
    pub sd_statistic: f64,
}

/// Estimated probability that the next attachment lands on a degree-`k`
/// vertex, against its limit value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeBiasedRow {
    pub k: u64,
    pub rao_blackwell: f64,
    pub naive: f64,
    pub limit_value: f64,
    pub abs_dev: f64,
}

/// One tracked process at one embedding checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRow {
    pub replicate: u64,
    pub n: usize,
    pub tau_n: f64,
    pub vertex: usize,
    pub count: u64,
}

/// Typed aggregate payload of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregates {
    TrackedDegrees(Vec<TrackedDegreeRow>),
    DegreeHistogram(Vec<HistogramRow>),
    TrajectorySummary(Vec<TrajectorySummaryRow>),
    NormalizerSummary(Vec<NormalizerRow>),
    CltSummary(Vec<CltRow>),
    SizeBiasedSummary(Vec<SizeBiasedRow>),
    EmbeddingArrivals(Vec<EmbeddingRow>),
}

/// A finished experiment: configuration echo, provenance, and aggregates.
/// Wall time is measured but excluded from the serialized bytes so equal
/// runs produce equal files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub library_version: String,
    pub statistic: Statistic,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub stream_scheme: String,
    pub growth_rate: SeriesDiagnostics,
    pub aggregates: Aggregates,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl Report {
    pub fn new(
        statistic: Statistic,
        config: ExperimentConfig,
        aggregates: Aggregates,
    ) -> Result<Self> {
        let config_hash = config.hash();
        Ok(Report {
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            statistic,
            config,
            config_hash,
            stream_scheme: depref_core::rng::STREAM_SCHEME.to_string(),
            growth_rate: SeriesDiagnostics::solve(ROOT_TOL)?,
            aggregates,
            wall_time_secs: 0.0,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self).context("serializing report")?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading report {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing report {}", path.display()))
    }

    /// CSV rendering: a config-hash comment, a header, then the rows of
    /// the aggregate payload.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# config_hash={}", self.config_hash).unwrap();
        match &self.aggregates {
            Aggregates::TrackedDegrees(rows) => {
                writeln!(out, "replicate,n,vertex,degree").unwrap();
                for r in rows {
                    writeln!(out, "{},{},{},{}", r.replicate, r.n, r.vertex, r.degree).unwrap();
                }
            }
            Aggregates::DegreeHistogram(rows) => {
                writeln!(out, "replicate,n,degree_k,count").unwrap();
                for r in rows {
                    writeln!(out, "{},{},{},{}", r.replicate, r.n, r.degree_k, r.count).unwrap();
                }
            }
            Aggregates::TrajectorySummary(rows) => {
                writeln!(
                    out,
                    "n,vertex,mean_degree,sample_variance,expected_degree,variance_bound,mean_over_log"
                )
                .unwrap();
                for r in rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        r.n,
                        r.vertex,
                        r.mean_degree,
                        r.sample_variance,
                        opt(r.expected_degree),
                        opt(r.variance_bound),
                        r.mean_over_log
                    )
                    .unwrap();
                }
            }
            Aggregates::NormalizerSummary(rows) => {
                writeln!(out, "n,mean_normalizer,mean_ratio_to_n,max_abs_dev_from_rate").unwrap();
                for r in rows {
                    writeln!(
                        out,
                        "{},{},{},{}",
                        r.n, r.mean_normalizer, r.mean_ratio_to_n, r.max_abs_dev_from_rate
                    )
                    .unwrap();
                }
            }
            Aggregates::CltSummary(rows) => {
                writeln!(out, "n,vertex,replicates,ks_distance,mean_statistic,sd_statistic")
                    .unwrap();
                for r in rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        r.n, r.vertex, r.replicates, r.ks_distance, r.mean_statistic, r.sd_statistic
                    )
                    .unwrap();
                }
            }
            Aggregates::SizeBiasedSummary(rows) => {
                writeln!(out, "k,rao_blackwell,naive,limit_value,abs_dev").unwrap();
                for r in rows {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        r.k, r.rao_blackwell, r.naive, r.limit_value, r.abs_dev
                    )
                    .unwrap();
                }
            }
            Aggregates::EmbeddingArrivals(rows) => {
                writeln!(out, "replicate,n,tau_n,vertex,count").unwrap();
                for r in rows {
                    writeln!(out, "{},{},{},{},{}", r.replicate, r.n, r.tau_n, r.vertex, r.count)
                        .unwrap();
                }
            }
        }
        out
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        Report::new(
            Statistic::Clt,
            ExperimentConfig::default(),
            Aggregates::CltSummary(vec![CltRow {
                n: 100,
                vertex: 2,
                replicates: 10,
                ks_distance: 0.25,
                mean_statistic: 0.5,
                sd_statistic: 1.1,
            }]),
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip_preserves_everything_but_wall_time() {
        let mut report = sample_report();
        report.wall_time_secs = 3.25;
        let json = report.to_json().unwrap();
        let parsed: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.wall_time_secs, 0.0);
        assert_eq!(parsed.statistic, report.statistic);
        assert_eq!(parsed.aggregates, report.aggregates);
        assert_eq!(parsed.config_hash, report.config_hash);
        // Wall time must not appear in the bytes at all.
        assert!(!json.contains("wall_time"));
    }

    #[test]
    fn csv_carries_hash_comment_and_schema() {
        let report = sample_report();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), format!("# config_hash={}", report.config_hash));
        assert_eq!(lines.next().unwrap(), "n,vertex,replicates,ks_distance,mean_statistic,sd_statistic");
        assert_eq!(lines.next().unwrap(), "100,2,10,0.25,0.5,1.1");
    }

    #[test]
    fn growth_rate_diagnostics_present_in_every_report() {
        let report = sample_report();
        assert!((report.growth_rate.lambda_star - 0.641923987771781).abs() < 1e-9);
        assert!((report.growth_rate.rho_hat_at_root - 1.0).abs() < 1e-9);
        assert!(report.growth_rate.series_terms_used > 0);
    }
}
