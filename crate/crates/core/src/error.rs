//! Error type shared by all core modules.

use thiserror::Error;

/// Errors surfaced by the simulation engine and oracles.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A constructor or operation received an argument outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A vertex id outside `1..=n` was requested.
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    /// A checkpoint beyond the growth target was requested.
    #[error("checkpoint {checkpoint} exceeds target size {n_target}")]
    CheckpointBeyondTarget { checkpoint: usize, n_target: usize },

    /// The rejection sampler exhausted its retry budget, which indicates
    /// corrupted state (acceptance probability per round is (n-1)/n).
    #[error("rejection sampler exceeded {retries} retries; graph state is corrupted")]
    SamplerFault { retries: u64 },

    /// A deterministic normalizer bound was violated; this should never
    /// happen for a correctly maintained state.
    #[error("normalizer bound violated at n={n}: {detail}")]
    NormalizerBound { n: usize, detail: String },

    /// Brute-force enumeration would exceed the history cap.
    #[error("enumeration of {histories} attachment histories exceeds cap {cap}")]
    EnumerationTooLarge { histories: u128, cap: u128 },

    /// The root bracket could not be established (broken series evaluation).
    #[error("no sign change of rho_hat - 1 on bracket [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
}

/// Convenience alias used throughout the crate.
pub type CoreResult<T> = Result<T, CoreError>;
