//! Experiment drivers, reporting, and the acceptance verification suite
//! built on top of `depref-core`.
//!
//! The harness turns engine runs into reproducible experiments: a resolved
//! configuration (defaults, then config file, then flags) is hashed into
//! every report, replicates run on independent seeded streams folded in
//! replicate order, and the verification suite checks each headline limit
//! statement against pinned tolerances.

pub mod cli;
pub mod config;
pub mod equiv;
pub mod estimators;
pub mod report;
pub mod run;
pub mod thresholds;
pub mod verify;
