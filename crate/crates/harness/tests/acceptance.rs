//! Runs the full acceptance suite and prints one verdict line per check.
//!
//! This target uses `harness = false` so the `PASS`/`FAIL` lines reach the
//! terminal unconditionally instead of being swallowed by test capture.  The
//! process exits nonzero if any check fails, which `cargo test` reports as a
//! failure of this target.

use std::process::ExitCode;

use depref_harness::verify::run_suite;

fn main() -> ExitCode {
    let results = match run_suite("all", 0) {
        Ok(results) => results,
        Err(err) => {
            eprintln!("acceptance suite could not run: {err:#}");
            return ExitCode::FAILURE;
        }
    };
    let mut failed = 0usize;
    for check in &results {
        println!("{check}");
        if !check.passed {
            failed += 1;
        }
    }
    println!("{} checks, {failed} failed", results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
