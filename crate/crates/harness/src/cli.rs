//! Command-line interface: argument definitions and top-level dispatch.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use depref_core::oracle::{DegreeExpectationTable, InitConvention, NkExpectationTable};

use crate::config::{ExperimentConfig, PartialConfig};
use crate::estimators::{
    run_clt, run_degree_dist, run_embed, run_grow, run_normalizer, run_size_biased, run_trajectory,
};
use crate::report::{Report, SeriesDiagnostics};
use crate::verify;

/// Simulation engine and verification harness for de-preferential
/// attachment random graphs.
#[derive(Debug, Parser)]
#[command(name = "depref", version, about)]
pub struct Cli {
    /// TOML experiment configuration; command-line flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow graphs and report every tracked degree per replicate.
    Grow(RunArgs),
    /// Report degree histograms per replicate and checkpoint.
    DegreeDist(RunArgs),
    /// Summarize tracked degrees across replicates, with the exact
    /// expectation columns for the linear model.
    Trajectory {
        #[command(flatten)]
        args: RunArgs,
        /// Summarize the inverse-model normalizer instead of degrees.
        #[arg(long)]
        normalizer: bool,
    },
    /// Standardize tracked degrees and measure the distance to the
    /// standard normal at each checkpoint (linear model).
    Clt(RunArgs),
    /// Estimate the attachment-target degree distribution two ways and
    /// compare with the limiting values.
    SizeBiased(RunArgs),
    /// Run the continuous-time embedding and report arrival times.
    Embed(RunArgs),
    /// Solve the rate equation and print solver diagnostics as JSON.
    LambdaStar {
        /// Residual tolerance for the root.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Print an exact expectation table as CSV.
    Oracle(OracleArgs),
    /// Run an acceptance suite and print one line per check.
    Verify {
        /// Suite name, one of: brute-force, equivalence, bounds, series,
        /// linear-dist, linear-trajectory, linear-clt, inverse-family,
        /// birth-process, size-biased, tightness, determinism, all.
        suite: String,
        /// Rayon worker threads (0 = library default).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Load a saved JSON report and re-emit it as CSV or JSON.
    Report {
        /// Path to a report previously written with --format json.
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Output path (stdout when omitted).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// Flags shared by every experiment subcommand; unset values fall back to
/// the configuration file and then the defaults.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Model variant: linear | inverse.
    #[arg(long)]
    pub model: Option<String>,
    /// Half-edges per incoming vertex.
    #[arg(long)]
    pub m: Option<u64>,
    /// Final vertex count.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub replicates: Option<u64>,
    /// Master seed; replicate r runs on stream r.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Intermediate vertex counts to snapshot, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<usize>>,
    /// Vertices whose degrees are tracked, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub track: Option<Vec<usize>>,
    /// Rayon worker threads (0 = library default).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Output path (stdout when omitted).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

impl RunArgs {
    fn to_partial(&self) -> PartialConfig {
        PartialConfig {
            model: self.model.clone(),
            m: self.m,
            n: self.n,
            replicates: self.replicates,
            seed: self.seed,
            checkpoints: self.checkpoints.clone(),
            track: self.track.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Which table to print.
    #[arg(long, value_enum)]
    pub table: OracleTable,
    /// Half-edges per incoming vertex (degree table only).
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    /// Tracked vertex (degree table only).
    #[arg(long, default_value_t = 1)]
    pub vertex: usize,
    /// Vertex count the table runs to.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Output path (stdout when omitted).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleTable {
    /// Expected tracked degree and its variance bound per n.
    Degree,
    /// Expected count of each degree class at n, with the deviation from
    /// the `n 2^-k` limit (linear model, one half-edge).
    Counts,
}

/// Parses arguments and runs the requested command, returning the process
/// exit code: 0 on success, 1 on usage or runtime errors, 2 when an
/// acceptance suite ran to completion with failing checks.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let config_file = cli.config.as_deref();
    match cli.command {
        Command::Grow(args) => experiment(config_file, &args, run_grow),
        Command::DegreeDist(args) => experiment(config_file, &args, run_degree_dist),
        Command::Trajectory { args, normalizer } => {
            if normalizer {
                experiment(config_file, &args, run_normalizer)
            } else {
                experiment(config_file, &args, run_trajectory)
            }
        }
        Command::Clt(args) => experiment(config_file, &args, run_clt),
        Command::SizeBiased(args) => experiment(config_file, &args, run_size_biased),
        Command::Embed(args) => experiment(config_file, &args, run_embed),
        Command::LambdaStar { tol } => {
            let diagnostics = SeriesDiagnostics::solve(tol)?;
            println!("{}", serde_json::to_string_pretty(&diagnostics)?);
            Ok(0)
        }
        Command::Oracle(args) => {
            let text = oracle_table(&args)?;
            write_output(&text, args.out.as_deref())?;
            Ok(0)
        }
        Command::Verify { suite, workers } => {
            let results = verify::run_suite(&suite, workers)?;
            let mut failed = 0usize;
            for result in &results {
                println!("{result}");
                if !result.passed {
                    failed += 1;
                }
            }
            println!("{} checks, {failed} failed", results.len());
            Ok(if failed == 0 { 0 } else { 2 })
        }
        Command::Report { input, format, out } => {
            let report = Report::from_json_file(&input)?;
            let text = match format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json()?,
            };
            write_output(&text, out.as_deref())?;
            Ok(0)
        }
    }
}

fn experiment(
    config_file: Option<&Path>,
    args: &RunArgs,
    driver: fn(&ExperimentConfig, usize) -> Result<Report>,
) -> Result<i32> {
    let config = ExperimentConfig::resolve(config_file, &args.to_partial())?;
    let report = driver(&config, args.workers)?;
    let text = match args.format {
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Json => report.to_json()?,
    };
    write_output(&text, args.out.as_deref())?;
    eprintln!("completed in {:.2}s (config {})", report.wall_time_secs, report.config_hash);
    Ok(0)
}

fn oracle_table(args: &OracleArgs) -> Result<String> {
    let mut out = String::new();
    match args.table {
        OracleTable::Degree => {
            let table = DegreeExpectationTable::compute(
                args.m,
                args.vertex,
                InitConvention::ConfigurationAccurate,
                args.n,
            )?;
            out.push_str("n,vertex,expected_degree,variance_bound\n");
            for n in table.entry_n()..=table.n_max() {
                out.push_str(&format!(
                    "{n},{},{},{}\n",
                    args.vertex,
                    table.expected_degree(n)?,
                    table.variance_bound(n)?
                ));
            }
        }
        OracleTable::Counts => {
            let table = NkExpectationTable::compute(args.n)?;
            out.push_str("n,k,expected_Nk,epsilon_k\n");
            for k in 1..=args.n {
                out.push_str(&format!(
                    "{},{k},{},{}\n",
                    args.n,
                    table.expected_count(k),
                    table.limit_deviation(k)
                ));
            }
        }
    }
    Ok(out)
}

fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing output to {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn run_args_map_to_partial_config() {
        let cli = Cli::try_parse_from([
            "depref",
            "grow",
            "--model",
            "inverse",
            "--m",
            "2",
            "--n",
            "500",
            "--checkpoints",
            "100,250",
            "--track",
            "1,2,3",
        ])
        .unwrap();
        let Command::Grow(args) = cli.command else { panic!("wrong subcommand") };
        let partial = args.to_partial();
        assert_eq!(partial.model.as_deref(), Some("inverse"));
        assert_eq!(partial.m, Some(2));
        assert_eq!(partial.n, Some(500));
        assert_eq!(partial.checkpoints, Some(vec![100, 250]));
        assert_eq!(partial.track, Some(vec![1, 2, 3]));
    }

    #[test]
    fn oracle_tables_have_expected_headers() {
        let degree = oracle_table(&OracleArgs {
            table: OracleTable::Degree,
            m: 1,
            vertex: 1,
            n: 10,
            out: None,
        })
        .unwrap();
        assert!(degree.starts_with("n,vertex,expected_degree,variance_bound\n"));
        assert_eq!(degree.lines().count(), 10); // header + n = 2..=10

        let counts = oracle_table(&OracleArgs {
            table: OracleTable::Counts,
            m: 1,
            vertex: 1,
            n: 4,
            out: None,
        })
        .unwrap();
        assert!(counts.starts_with("n,k,expected_Nk,epsilon_k\n"));
        // First class at n = 4 carries expectation 9/5.
        let first: Vec<&str> = counts.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(&first[..2], ["4", "1"]);
        let value: f64 = first[2].parse().unwrap();
        assert!((value - 1.8).abs() < 1e-12, "{value}");
    }
}
