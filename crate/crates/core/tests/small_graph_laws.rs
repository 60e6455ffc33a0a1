//! End-to-end check through the public API: the discrete samplers and the
//! continuous-time embedding reproduce the enumerated degree-sequence laws
//! on small graphs.

use std::collections::BTreeMap;

use depref_core::embed::{simulate_embedding, EmbeddingConfig};
use depref_core::graph::GraphState;
use depref_core::oracle::{rational_to_f64, BruteForceDistribution};
use depref_core::rng::replicate_rng;
use depref_core::stats::chi_square_gof;
use depref_core::ModelVariant;

const REPLICATES: u64 = 30_000;
const SIGNIFICANCE: f64 = 1e-4;

fn frequencies<F>(mut sample: F) -> BTreeMap<Vec<u64>, u64>
where
    F: FnMut(u64) -> Vec<u64>,
{
    let mut freq = BTreeMap::new();
    for rep in 0..REPLICATES {
        *freq.entry(sample(rep)).or_insert(0) += 1;
    }
    freq
}

fn assert_matches_law(law: &BruteForceDistribution, freq: &BTreeMap<Vec<u64>, u64>) {
    for seq in freq.keys() {
        assert!(law.law().contains_key(seq), "unreachable sequence {seq:?} sampled");
    }
    let observed: Vec<u64> =
        law.law().keys().map(|seq| freq.get(seq).copied().unwrap_or(0)).collect();
    let expected: Vec<f64> = law.law().values().map(rational_to_f64).collect();
    let result = chi_square_gof(&observed, &expected, SIGNIFICANCE).unwrap();
    assert!(
        !result.rejected,
        "law mismatch: chi2 = {:.2}, p = {:.3e}",
        result.statistic, result.p_value
    );
}

#[test]
fn samplers_follow_enumerated_law_at_n4() {
    for variant in [ModelVariant::Linear, ModelVariant::Inverse] {
        let law = BruteForceDistribution::compute(variant, 1, 4).unwrap();
        let freq = frequencies(|rep| {
            let mut rng = replicate_rng(0xA201, rep);
            let mut state = GraphState::init(1, variant).unwrap();
            while state.n() < 4 {
                state.add_vertex(&mut rng).unwrap();
            }
            state.degrees().to_vec()
        });
        assert_matches_law(&law, &freq);
    }
}

#[test]
fn two_half_edge_sampler_follows_enumerated_law_at_n3() {
    for variant in [ModelVariant::Linear, ModelVariant::Inverse] {
        let law = BruteForceDistribution::compute(variant, 2, 3).unwrap();
        let freq = frequencies(|rep| {
            let mut rng = replicate_rng(0xA202, rep);
            let mut state = GraphState::init(2, variant).unwrap();
            while state.n() < 3 {
                state.add_vertex(&mut rng).unwrap();
            }
            state.degrees().to_vec()
        });
        assert_matches_law(&law, &freq);
    }
}

#[test]
fn embedding_jump_chain_follows_inverse_law_at_n4() {
    let law = BruteForceDistribution::compute(ModelVariant::Inverse, 1, 4).unwrap();
    let config = EmbeddingConfig {
        m: 1,
        n_target: 4,
        checkpoints: Vec::new(),
        tracked_vertices: Vec::new(),
    };
    let freq = frequencies(|rep| {
        let mut rng = replicate_rng(0xA203, rep);
        simulate_embedding(&config, &mut rng).unwrap().final_counts
    });
    assert_matches_law(&law, &freq);
}
