//! End-to-end checks of the `depref` binary: exit codes, output routing,
//! configuration layering, and the report round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn depref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depref"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn help_and_version_exit_zero() {
    let help = depref(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("de-preferential"));

    let version = depref(&["--version"]);
    assert_eq!(version.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    let unknown_flag = depref(&["grow", "--bogus"]);
    assert_eq!(unknown_flag.status.code(), Some(1));

    let missing_command = depref(&[]);
    assert_eq!(missing_command.status.code(), Some(1));

    let unknown_suite = depref(&["verify", "nonsense"]);
    assert_eq!(unknown_suite.status.code(), Some(1));
    assert!(stderr(&unknown_suite).contains("unknown suite"));
}

#[test]
fn model_mismatch_is_a_runtime_error() {
    let output = depref(&["clt", "--model", "inverse", "--n", "50", "--replicates", "2"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("linear"));
}

#[test]
fn verify_suite_prints_verdict_lines() {
    let output = depref(&["verify", "series"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("PASS C04"));
    assert!(text.contains("1 checks, 0 failed"));
}

#[test]
fn lambda_star_prints_solver_diagnostics() {
    let output = depref(&["lambda-star"]);
    assert_eq!(output.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("valid JSON");
    let root = parsed["lambda_star"].as_f64().expect("numeric root");
    assert!((root - 0.641923987771781).abs() < 1e-9);
    let at_root = parsed["rho_hat_at_root"].as_f64().expect("numeric series value");
    assert!((at_root - 1.0).abs() < 1e-10, "series at the root should be 1, got {at_root}");
}

#[test]
fn oracle_counts_table_has_expected_header() {
    let output = depref(&["oracle", "--table", "counts", "--n", "20"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert_eq!(text.lines().next(), Some("n,k,expected_Nk,epsilon_k"));
    assert_eq!(text.lines().count(), 21); // header plus k = 1..=20
}

#[test]
fn report_round_trips_through_json() {
    let args = [
        "grow",
        "--model",
        "inverse",
        "--m",
        "1",
        "--n",
        "60",
        "--replicates",
        "3",
        "--seed",
        "7",
        "--checkpoints",
        "30",
        "--track",
        "1,2",
    ];
    let json_path = tmp_path("grow.json");
    let csv_path = tmp_path("grow.csv");
    let json_run = depref(
        &[&args[..], &["--format", "json", "--out", json_path.to_str().unwrap()]].concat(),
    );
    assert_eq!(json_run.status.code(), Some(0), "stderr: {}", stderr(&json_run));
    let csv_run =
        depref(&[&args[..], &["--format", "csv", "--out", csv_path.to_str().unwrap()]].concat());
    assert_eq!(csv_run.status.code(), Some(0));

    // Re-emitting the saved JSON must reproduce the direct CSV byte for
    // byte, and passing it through as JSON must be a fixed point.
    let reemit_csv = depref(&["report", "--input", json_path.to_str().unwrap()]);
    assert_eq!(reemit_csv.status.code(), Some(0));
    let direct_csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(stdout(&reemit_csv), direct_csv);

    let reemit_json =
        depref(&["report", "--input", json_path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(reemit_json.status.code(), Some(0));
    let saved_json = std::fs::read_to_string(&json_path).unwrap();
    assert_eq!(stdout(&reemit_json), saved_json);
}

#[test]
fn config_file_layers_under_flags() {
    let config_path = tmp_path("exp.toml");
    std::fs::write(&config_path, "model = \"inverse\"\nn = 60\nreplicates = 2\nseed = 3\n")
        .unwrap();
    let output = depref(&[
        "grow",
        "--config",
        config_path.to_str().unwrap(),
        "--n",
        "80",
        "--track",
        "1",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    // Rows are replicate,n,vertex,degree after the hash comment and the
    // header.  The --n flag overrides the file's 60, and the replicate
    // count still comes from the file.
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|row| row.split(',').nth(1) == Some("80")));

    let bad_path = tmp_path("bad.toml");
    std::fs::write(&bad_path, "replciates = 5\n").unwrap();
    let bad = depref(&["grow", "--config", bad_path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("parsing config file"));
}
