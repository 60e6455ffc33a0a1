//! Core simulation engine for de-preferential attachment random graphs.
//!
//! Two growth rules are implemented. Both start from two vertices with degrees
//! `[2m, m]` and add one vertex with `m` half-edges per step, attaching the
//! half-edges sequentially with degrees updated between attachments:
//!
//! * **Linear**: a half-edge attaches to vertex `j` with probability
//!   `(1/(n-1)) * (1 - d_j / (k + m(2n-1)))` — high degree is penalized
//!   linearly.
//! * **Inverse**: a half-edge attaches to vertex `j` with probability
//!   proportional to `1/d_j`.
//!
//! Alongside the samplers the crate provides exact finite-`n` expectation
//! recursions and brute-force enumeration ([`oracle`]), the Malthusian
//! parameter solver and closed-form limit laws ([`limits`]), continuous-time
//! pure-birth embeddings of the inverse model ([`embed`]), and the shared
//! statistical test helpers ([`stats`]).

pub mod embed;
pub mod error;
pub mod fenwick;
pub mod graph;
pub mod limits;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod stats;

pub use error::CoreError;
pub use model::ModelVariant;
