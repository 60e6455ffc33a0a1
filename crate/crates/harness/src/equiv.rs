//! Exact-law equivalence checks: simulate small graphs many times, bin the
//! final degree sequences, and test them against the enumerated
//! distribution with a chi-square statistic.
//!
//! A deliberately corrupted sampler (attachment proportional to degree
//! instead of against it) runs through the same pipeline as a control; the
//! test must reject it.

use anyhow::{ensure, Context, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use depref_core::embed::{simulate_embedding, EmbeddingConfig};
use depref_core::graph::GraphState;
use depref_core::oracle::{rational_to_f64, BruteForceDistribution};
use depref_core::stats::{chi_square_gof, ChiSquareResult};
use depref_core::ModelVariant;

use crate::run::run_replicates;

/// Grows one graph to `n_target` vertices and returns its degree sequence.
pub fn graph_sequence<R: Rng + ?Sized>(
    variant: ModelVariant,
    m: u64,
    n_target: usize,
    rng: &mut R,
) -> Result<Vec<u64>> {
    let mut state = GraphState::init(m, variant)?;
    while state.n() < n_target {
        state.add_vertex(rng)?;
    }
    Ok(state.degrees().to_vec())
}

/// Runs the continuous-time embedding and returns the process counts at
/// the moment the `n_target`-th process is born. Under the jump-chain
/// equivalence these follow the inverse model's degree-sequence law.
pub fn embedding_sequence<R: Rng + ?Sized>(m: u64, n_target: usize, rng: &mut R) -> Result<Vec<u64>> {
    let config = EmbeddingConfig {
        m,
        n_target,
        checkpoints: Vec::new(),
        tracked_vertices: Vec::new(),
    };
    Ok(simulate_embedding(&config, rng)?.final_counts)
}

/// Control sampler with the attachment preference inverted: targets are
/// chosen proportional to degree. Same initial state, same sequential
/// half-edge bookkeeping, wrong law — the equivalence test must flag it.
pub fn preferential_control_sequence<R: Rng + ?Sized>(
    m: u64,
    n_target: usize,
    rng: &mut R,
) -> Result<Vec<u64>> {
    ensure!(m >= 1, "m must be >= 1");
    ensure!(n_target >= 2, "n_target must be >= 2");
    let mut degrees = vec![2 * m, m];
    let mut total = 3 * m;
    while degrees.len() < n_target {
        for _ in 0..m {
            let mut ticket = rng.random_range(0..total);
            let mut target = 0usize;
            while ticket >= degrees[target] {
                ticket -= degrees[target];
                target += 1;
            }
            degrees[target] += 1;
            total += 1;
        }
        degrees.push(m);
        total += m;
    }
    Ok(degrees)
}

/// Outcome of binning simulated degree sequences against an exact law.
#[derive(Debug, Clone)]
pub struct LawComparison {
    pub chi_square: ChiSquareResult,
    /// Simulated sequences that the exact law assigns zero probability.
    pub impossible_outcomes: u64,
    /// Distinct sequences observed among the possible ones.
    pub observed_support: usize,
    /// Support size of the exact law.
    pub law_support: usize,
}

impl LawComparison {
    /// A sampler passes when nothing impossible appeared and the
    /// chi-square test does not reject.
    pub fn accepts(&self) -> bool {
        self.impossible_outcomes == 0 && !self.chi_square.rejected
    }
}

/// Bins degree sequences by the exact law's support and runs the
/// goodness-of-fit test at the given significance level.
pub fn compare_to_exact_law(
    sequences: &[Vec<u64>],
    law: &BruteForceDistribution,
    significance: f64,
) -> Result<LawComparison> {
    ensure!(!sequences.is_empty(), "no sequences to compare");
    let law_map = law.law();
    let mut observed = vec![0u64; law_map.len()];
    let mut impossible = 0u64;
    for seq in sequences {
        match law_map.keys().position(|k| k == seq) {
            Some(i) => observed[i] += 1,
            None => impossible += 1,
        }
    }
    let expected: Vec<f64> = law_map.values().map(rational_to_f64).collect();
    let chi_square = chi_square_gof(&observed, &expected, significance)
        .context("chi-square against the enumerated law")?;
    Ok(LawComparison {
        chi_square,
        impossible_outcomes: impossible,
        observed_support: observed.iter().filter(|&&c| c > 0).count(),
        law_support: law_map.len(),
    })
}

/// Which sampler feeds the equivalence pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceSource {
    Graph(ModelVariant),
    /// Continuous-time embedding jump chain (inverse model law).
    Embedding,
    /// Corrupted control: preference proportional to degree.
    PreferentialControl,
}

/// Simulates `replicates` degree sequences from the given source on
/// independent streams and compares them to the enumerated law.
pub fn run_equivalence(
    source: SequenceSource,
    m: u64,
    n_target: usize,
    replicates: u64,
    seed: u64,
    workers: usize,
    significance: f64,
) -> Result<LawComparison> {
    let law_variant = match source {
        SequenceSource::Graph(v) => v,
        // The embedding and the corrupted control are both judged against
        // the inverse law (the control is meant to fail that comparison).
        SequenceSource::Embedding | SequenceSource::PreferentialControl => ModelVariant::Inverse,
    };
    let law = BruteForceDistribution::compute(law_variant, m, n_target)
        .context("enumerating the exact law")?;
    let job = move |_: u64, rng: &mut ChaCha8Rng| match source {
        SequenceSource::Graph(v) => graph_sequence(v, m, n_target, rng),
        SequenceSource::Embedding => embedding_sequence(m, n_target, rng),
        SequenceSource::PreferentialControl => preferential_control_sequence(m, n_target, rng),
    };
    let sequences = run_replicates(replicates, seed, workers, job)?;
    compare_to_exact_law(&sequences, &law, significance)
}
