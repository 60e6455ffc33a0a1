//! Dynamic weighted sampling via a binary indexed (Fenwick) tree.
//!
//! Stores one nonnegative weight per item and supports point update, exact
//! point query, and sampling by cumulative-weight inversion, all in
//! `O(log n)`. The raw weights are kept alongside the tree so point queries
//! are exact and the tree can be rebuilt from scratch to shed accumulated
//! floating-point drift.

use rand::Rng;

/// Prefix-sum tree over per-item weights, sampled by inverting a uniform
/// draw against the cumulative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightIndex {
    /// 1-indexed Fenwick array of length `cap + 1`; `cap` is a power of two.
    tree: Vec<f64>,
    /// Raw weights, the source of truth for queries and rebuilds.
    weights: Vec<f64>,
    /// Running total of `weights`, updated incrementally.
    total: f64,
    cap: usize,
}

impl WeightIndex {
    pub fn new() -> Self {
        Self::with_capacity(2)
    }

    pub fn with_capacity(capacity: usize) -> Self {
        let cap = capacity.max(2).next_power_of_two();
        WeightIndex { tree: vec![0.0; cap + 1], weights: Vec::with_capacity(cap), total: 0.0, cap }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Running total of all weights (maintained incrementally; see
    /// [`WeightIndex::rebuild`] for drift control).
    pub fn total(&self) -> f64 {
        self.total
    }

    /// The tree root's version of the total, accumulated along a different
    /// summation order than [`WeightIndex::total`]; the two agree up to
    /// floating-point drift and are reconciled by `rebuild`.
    pub fn tree_total(&self) -> f64 {
        self.tree[self.cap]
    }

    /// Exact stored weight of item `idx` (0-based).
    pub fn weight(&self, idx: usize) -> f64 {
        self.weights[idx]
    }

    /// Appends an item with the given weight.
    pub fn push(&mut self, w: f64) {
        debug_assert!(w >= 0.0 && w.is_finite());
        let idx = self.weights.len();
        self.weights.push(w);
        if self.weights.len() > self.cap {
            self.grow();
        } else {
            self.tree_add(idx, w);
        }
        self.total += w;
    }

    /// Sets the weight of item `idx` (0-based) to `w`.
    pub fn set(&mut self, idx: usize, w: f64) {
        debug_assert!(w >= 0.0 && w.is_finite());
        let delta = w - self.weights[idx];
        self.weights[idx] = w;
        self.tree_add(idx, delta);
        self.total += delta;
    }

    /// Recomputes the tree and the running total from the raw weights,
    /// discarding accumulated floating-point drift.
    pub fn rebuild(&mut self) {
        self.tree.iter_mut().for_each(|x| *x = 0.0);
        self.total = 0.0;
        for i in 0..self.weights.len() {
            let w = self.weights[i];
            self.tree_add(i, w);
            self.total += w;
        }
    }

    /// Samples an item index with probability proportional to its weight.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sample_at(rng.random::<f64>())
    }

    /// Deterministic sampling from a uniform variate `u` in `[0, 1)`:
    /// returns the item whose cumulative-weight interval contains
    /// `u * total`.
    pub fn sample_at(&self, u: f64) -> usize {
        debug_assert!(!self.weights.is_empty(), "sampling from empty index");
        let mut rem = u * self.total;
        let mut idx = 0usize;
        let mut step = self.cap;
        while step > 0 {
            let next = idx + step;
            if next <= self.cap && self.tree[next] < rem {
                rem -= self.tree[next];
                idx = next;
            }
            step >>= 1;
        }
        // idx is now the count of items with cumulative weight < rem; clamp
        // guards the u -> 1 floating-point edge.
        idx.min(self.weights.len() - 1)
    }

    fn grow(&mut self) {
        self.cap *= 2;
        self.tree = vec![0.0; self.cap + 1];
        let total_backup = self.total;
        for i in 0..self.weights.len() {
            let w = self.weights[i];
            self.tree_add(i, w);
        }
        self.total = total_backup;
    }

    fn tree_add(&mut self, idx: usize, delta: f64) {
        let mut pos = idx + 1;
        while pos <= self.cap {
            self.tree[pos] += delta;
            pos += pos & pos.wrapping_neg();
        }
    }
}

impl Default for WeightIndex {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cumulative(weights: &[f64]) -> Vec<f64> {
        let mut acc = 0.0;
        weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect()
    }

    #[test]
    fn point_queries_are_exact() {
        let mut t = WeightIndex::new();
        t.push(0.5);
        t.push(1.0 / 3.0);
        t.set(0, 0.1 + 0.2); // deliberately non-representable sum
        assert_eq!(t.weight(0), 0.1 + 0.2);
        assert_eq!(t.weight(1), 1.0 / 3.0);
    }

    #[test]
    fn sampling_partitions_unit_interval_by_weight() {
        let mut t = WeightIndex::new();
        for w in [2.0, 1.0, 4.0, 1.0] {
            t.push(w);
        }
        // Midpoint of each item's normalized cumulative interval must map
        // back to that item.
        let cum = cumulative(&[2.0, 1.0, 4.0, 1.0]);
        let total = 8.0;
        let mut lo = 0.0;
        for (i, hi) in cum.iter().enumerate() {
            let mid = (lo + hi) / 2.0 / total;
            assert_eq!(t.sample_at(mid), i);
            lo = *hi;
        }
        assert_eq!(t.sample_at(0.0), 0);
        // u -> 1 edge clamps to the last item.
        assert_eq!(t.sample_at(1.0 - 1e-16), 3);
    }

    #[test]
    fn grows_past_initial_capacity() {
        let mut t = WeightIndex::with_capacity(2);
        for i in 1..=100 {
            t.push(1.0 / i as f64);
        }
        assert_eq!(t.len(), 100);
        let direct: f64 = (1..=100).map(|i| 1.0 / i as f64).sum();
        assert!((t.total() - direct).abs() <= 1e-12 * direct);
        assert!((t.tree_total() - direct).abs() <= 1e-12 * direct);
    }

    proptest! {
        // Tree root and running total agree with a reference sum within
        // 1e-12 relative after arbitrary push/set interleavings.
        #[test]
        fn totals_track_reference_sum(ops in proptest::collection::vec((any::<bool>(), 1u32..1000), 1..200)) {
            let mut t = WeightIndex::new();
            let mut shadow: Vec<f64> = Vec::new();
            for (push, raw) in ops {
                let w = f64::from(raw) / 997.0;
                if push || shadow.is_empty() {
                    t.push(w);
                    shadow.push(w);
                } else {
                    let idx = (raw as usize) % shadow.len();
                    t.set(idx, w);
                    shadow[idx] = w;
                }
            }
            let reference: f64 = shadow.iter().sum();
            prop_assert!((t.total() - reference).abs() <= 1e-12 * reference.max(1.0));
            prop_assert!((t.tree_total() - reference).abs() <= 1e-12 * reference.max(1.0));
            for (i, w) in shadow.iter().enumerate() {
                prop_assert_eq!(t.weight(i), *w);
            }
            // Rebuild discards drift and preserves every point weight.
            t.rebuild();
            for (i, w) in shadow.iter().enumerate() {
                prop_assert_eq!(t.weight(i), *w);
            }
            prop_assert!((t.total() - reference).abs() <= 1e-12 * reference.max(1.0));
        }

        // Midpoint inversion returns the owning item for random weight sets.
        #[test]
        fn midpoint_inversion_is_consistent(weights in proptest::collection::vec(1u32..1000, 1..60)) {
            let ws: Vec<f64> = weights.iter().map(|&w| f64::from(w) / 31.0).collect();
            let mut t = WeightIndex::new();
            for &w in &ws {
                t.push(w);
            }
            let cum = cumulative(&ws);
            let total = *cum.last().unwrap();
            let mut lo = 0.0;
            for (i, hi) in cum.iter().enumerate() {
                let mid = (lo + hi) / 2.0 / total;
                prop_assert_eq!(t.sample_at(mid), i);
                lo = *hi;
            }
        }
    }
}
