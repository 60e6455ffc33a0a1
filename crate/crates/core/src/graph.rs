//! Growing multigraph state and the attachment step for both models.
//!
//! The graph is represented purely by its degree sequence: every result the
//! engine verifies is a functional of degrees, so no edge list is stored.
//! Vertex ids are 1-based. A growth step attaches the incoming vertex's `m`
//! half-edges sequentially (degrees update between attachments), then the
//! incoming vertex joins with degree `m` — its own stubs. Half-edges never
//! target the incoming vertex, so multi-edges arise but self-loops do not.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{CoreError, CoreResult};
use crate::fenwick::WeightIndex;
use crate::model::ModelVariant;

/// Retry budget for the linear model's rejection sampler. Acceptance per
/// round is (n-1)/n >= 1/2, so reaching the cap indicates corrupted state.
const REJECTION_RETRY_CAP: u64 = 1_000_000;

/// Incremental weight updates are flushed and recomputed after this many
/// attachments to shed floating-point drift.
const WEIGHT_REFRESH_INTERVAL: u64 = 1 << 16;

/// Relative slack for the normalizer bound checks. The bounds are sure
/// statements in exact arithmetic but can be attained exactly (all degrees
/// `2m` mid-step sits on the lower bound), so the incremental float sum
/// needs room for its drift, which stays orders of magnitude below this.
const BOUND_SLACK: f64 = 1e-9;

/// One growing multigraph: degree sequence, half-edge phase, and (for the
/// inverse model) the dynamic sampling index over weights `1/d_j`.
#[derive(Debug, Clone)]
pub struct GraphState {
    variant: ModelVariant,
    m: u64,
    /// `degrees[v-1]` is the degree of vertex `v`, counting dangling stubs.
    degrees: Vec<u64>,
    /// Half-edges of the incoming vertex already attached this step.
    k: u64,
    /// Sum of degrees over existing vertices; always `k + m(2n - 1)`.
    total_degree: u64,
    /// Inverse model only: prefix-sum tree over `1/d_j`.
    weights: Option<WeightIndex>,
    attachments_since_refresh: u64,
}

impl GraphState {
    /// Initial configuration: two vertices with degrees `[2m, m]` — joined
    /// by `m` edges, with `m` free half-edges at the first vertex.
    pub fn init(m: u64, variant: ModelVariant) -> CoreResult<Self> {
        if m == 0 {
            return Err(CoreError::InvalidParameter("m must be >= 1".into()));
        }
        let degrees = vec![2 * m, m];
        let weights = match variant {
            ModelVariant::Linear => None,
            ModelVariant::Inverse => {
                let mut w = WeightIndex::with_capacity(16);
                for &d in &degrees {
                    w.push(1.0 / d as f64);
                }
                Some(w)
            }
        };
        let state = GraphState {
            variant,
            m,
            degrees,
            k: 0,
            total_degree: 3 * m,
            weights,
            attachments_since_refresh: 0,
        };
        state.assert_degree_sum();
        Ok(state)
    }

    /// Builds a mid-step state directly from a degree sequence, for tests
    /// and oracle-driven comparisons. The degree-sum invariant must hold.
    pub fn from_parts(
        variant: ModelVariant,
        m: u64,
        degrees: Vec<u64>,
        k: u64,
    ) -> CoreResult<Self> {
        if m == 0 || degrees.len() < 2 || k > m {
            return Err(CoreError::InvalidParameter(format!(
                "need m >= 1, n >= 2, k <= m; got m={m}, n={}, k={k}",
                degrees.len()
            )));
        }
        let n = degrees.len() as u64;
        let total: u64 = degrees.iter().sum();
        if total != k + m * (2 * n - 1) {
            return Err(CoreError::InvalidParameter(format!(
                "degree sum {total} != k + m(2n-1) = {}",
                k + m * (2 * n - 1)
            )));
        }
        if degrees.iter().any(|&d| d == 0) {
            return Err(CoreError::InvalidParameter("degrees must be positive".into()));
        }
        let weights = match variant {
            ModelVariant::Linear => None,
            ModelVariant::Inverse => {
                let mut w = WeightIndex::with_capacity(degrees.len());
                for &d in &degrees {
                    w.push(1.0 / d as f64);
                }
                Some(w)
            }
        };
        Ok(GraphState {
            variant,
            m,
            degrees,
            k,
            total_degree: total,
            weights,
            attachments_since_refresh: 0,
        })
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Current number of vertices.
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// Half-edges of the incoming vertex attached so far this step.
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn total_degree(&self) -> u64 {
        self.total_degree
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Degree of vertex `v` (1-based).
    pub fn degree(&self, v: usize) -> CoreResult<u64> {
        self.check_vertex(v)?;
        Ok(self.degrees[v - 1])
    }

    /// Inverse-model normalizer `D = Σ_j 1/d_j`; `None` for the linear model.
    pub fn inverse_weight_sum(&self) -> Option<f64> {
        self.weights.as_ref().map(|w| w.total())
    }

    /// Probability that the next half-edge attaches to vertex `j`.
    pub fn attach_prob(&self, j: usize) -> CoreResult<f64> {
        self.check_vertex(j)?;
        if self.k >= self.m {
            return Err(CoreError::InvalidParameter(
                "attach_prob requires an unfinished step (k < m)".into(),
            ));
        }
        let d = self.degrees[j - 1] as f64;
        match self.variant {
            ModelVariant::Linear => {
                let n = self.n() as f64;
                Ok((1.0 - d / self.total_degree as f64) / (n - 1.0))
            }
            ModelVariant::Inverse => {
                let total = self.weights.as_ref().expect("inverse state has weights").total();
                Ok((1.0 / d) / total)
            }
        }
    }

    /// Samples the target of the next half-edge without mutating the state.
    ///
    /// Linear: rejection sampling — propose a uniform vertex, accept with
    /// probability `1 - d_j/(k + m(2n-1))`; acceptance per round is
    /// `(n-1)/n`. Inverse: cumulative-weight inversion on the prefix-sum
    /// tree.
    pub fn sample_target<R: Rng + ?Sized>(&self, rng: &mut R) -> CoreResult<usize> {
        if self.k >= self.m {
            return Err(CoreError::InvalidParameter(
                "sample_target requires an unfinished step (k < m)".into(),
            ));
        }
        match self.variant {
            ModelVariant::Linear => {
                let n = self.n();
                let total = self.total_degree as f64;
                for _ in 0..REJECTION_RETRY_CAP {
                    let j = rng.random_range(0..n);
                    let accept = 1.0 - self.degrees[j] as f64 / total;
                    if rng.random::<f64>() < accept {
                        return Ok(j + 1);
                    }
                }
                Err(CoreError::SamplerFault { retries: REJECTION_RETRY_CAP })
            }
            ModelVariant::Inverse => {
                let w = self.weights.as_ref().expect("inverse state has weights");
                Ok(w.sample(rng) + 1)
            }
        }
    }

    /// Attaches the current half-edge to vertex `j`: `d_j += 1`, `k += 1`.
    pub fn apply_attachment(&mut self, j: usize) -> CoreResult<()> {
        self.check_vertex(j)?;
        if self.k >= self.m {
            return Err(CoreError::InvalidParameter(
                "apply_attachment requires an unfinished step (k < m)".into(),
            ));
        }
        self.degrees[j - 1] += 1;
        self.k += 1;
        self.total_degree += 1;
        if let Some(w) = self.weights.as_mut() {
            w.set(j - 1, 1.0 / self.degrees[j - 1] as f64);
            self.attachments_since_refresh += 1;
            if self.attachments_since_refresh >= WEIGHT_REFRESH_INTERVAL {
                self.refresh_weights();
            }
        }
        self.assert_degree_sum();
        self.check_normalizer_bounds()
    }

    /// Samples and applies one half-edge attachment, returning the target.
    pub fn attach_half_edge<R: Rng + ?Sized>(&mut self, rng: &mut R) -> CoreResult<usize> {
        let j = self.sample_target(rng)?;
        self.apply_attachment(j)?;
        Ok(j)
    }

    /// One full growth step: attaches all `m` half-edges, then adds the new
    /// vertex with degree `m` (its own stubs).
    pub fn add_vertex<R: Rng + ?Sized>(&mut self, rng: &mut R) -> CoreResult<()> {
        if self.k != 0 {
            return Err(CoreError::InvalidParameter(
                "add_vertex requires a step boundary (k = 0)".into(),
            ));
        }
        for _ in 0..self.m {
            self.attach_half_edge(rng)?;
        }
        self.complete_vertex()
    }

    /// Finishes a step after all `m` half-edges are attached.
    fn complete_vertex(&mut self) -> CoreResult<()> {
        debug_assert_eq!(self.k, self.m);
        self.degrees.push(self.m);
        self.total_degree += self.m;
        self.k = 0;
        if let Some(w) = self.weights.as_mut() {
            w.push(1.0 / self.m as f64);
        }
        self.assert_degree_sum();
        self.check_normalizer_bounds()
    }

    /// Recomputes the sampling weights and their running total from the
    /// degree sequence, discarding floating-point drift.
    pub fn refresh_weights(&mut self) {
        if let Some(w) = self.weights.as_mut() {
            for (i, &d) in self.degrees.iter().enumerate() {
                w.set(i, 1.0 / d as f64);
            }
            w.rebuild();
            self.attachments_since_refresh = 0;
        }
    }

    /// Verifies every state invariant from first principles; used by tests
    /// and at checkpoints.
    pub fn check_invariants(&self) -> CoreResult<()> {
        let n = self.n() as u64;
        let expected = self.k + self.m * (2 * n - 1);
        if self.total_degree != expected {
            return Err(CoreError::InvalidParameter(format!(
                "degree sum {} != k + m(2n-1) = {expected}",
                self.total_degree
            )));
        }
        let direct: u64 = self.degrees.iter().sum();
        if direct != self.total_degree {
            return Err(CoreError::InvalidParameter(format!(
                "stored total {} != recomputed {direct}",
                self.total_degree
            )));
        }
        if self.k == 0 && self.degrees.iter().any(|&d| d < self.m) {
            return Err(CoreError::InvalidParameter(
                "a vertex fell below degree m at a step boundary".into(),
            ));
        }
        if let Some(w) = self.weights.as_ref() {
            let recomputed: f64 = self.degrees.iter().map(|&d| 1.0 / d as f64).sum();
            let drift = (w.total() - recomputed).abs();
            if drift > 1e-12 * recomputed {
                return Err(CoreError::InvalidParameter(format!(
                    "incremental weight sum {} drifted from recomputed {recomputed}",
                    w.total()
                )));
            }
        }
        self.check_normalizer_bounds()
    }

    /// Deterministic inverse-model normalizer bounds: with `n` existing
    /// vertices, `n/(2m) <= D <= n/m` (equivalently `m/n <= 1/D <= 2m/n`).
    /// These hold surely — degrees are at least `m` and sum to less than
    /// `2mn` — so a violation means the state is corrupted.
    fn check_normalizer_bounds(&self) -> CoreResult<()> {
        let Some(w) = self.weights.as_ref() else {
            return Ok(());
        };
        let n = self.n() as f64;
        let m = self.m as f64;
        let d = w.total();
        let lo = n / (2.0 * m);
        let hi = n / m;
        if d < lo * (1.0 - BOUND_SLACK) || d > hi * (1.0 + BOUND_SLACK) {
            return Err(CoreError::NormalizerBound {
                n: self.n(),
                detail: format!("D = {d} outside [{lo}, {hi}]"),
            });
        }
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> CoreResult<()> {
        if v == 0 || v > self.n() {
            return Err(CoreError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(())
    }

    /// The degree-sum identity is integer arithmetic and must hold after
    /// every mutation; cheap enough to keep on in release builds.
    fn assert_degree_sum(&self) {
        let n = self.degrees.len() as u64;
        assert_eq!(
            self.total_degree,
            self.k + self.m * (2 * n - 1),
            "degree-sum invariant violated"
        );
    }
}

/// Configuration for [`grow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowConfig {
    pub variant: ModelVariant,
    pub m: u64,
    pub n_target: usize,
    /// Vertex counts at which snapshots are recorded; the target itself is
    /// always included.
    pub checkpoints: Vec<usize>,
    /// Vertices whose degrees are recorded at each checkpoint.
    pub tracked_vertices: Vec<usize>,
    /// Record the realized target of the first half-edge leaving each
    /// checkpoint (the naive size-biased draw).
    pub record_attachment_draw: bool,
}

impl GrowConfig {
    pub fn new(variant: ModelVariant, m: u64, n_target: usize) -> Self {
        GrowConfig {
            variant,
            m,
            n_target,
            checkpoints: Vec::new(),
            tracked_vertices: vec![1],
            record_attachment_draw: false,
        }
    }

    /// Checkpoints sorted, deduplicated, and closed with the target.
    fn normalized_checkpoints(&self) -> CoreResult<Vec<usize>> {
        let mut cps = self.checkpoints.clone();
        cps.push(self.n_target);
        cps.sort_unstable();
        cps.dedup();
        for &cp in &cps {
            if cp < 2 || cp > self.n_target {
                return Err(CoreError::CheckpointBeyondTarget {
                    checkpoint: cp,
                    n_target: self.n_target,
                });
            }
        }
        Ok(cps)
    }
}

/// Degree of one tracked vertex at a checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrackedDegree {
    pub vertex: usize,
    pub degree: u64,
}

/// The realized first half-edge draw leaving a checkpoint, before the
/// attachment is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttachmentDraw {
    pub target_vertex: usize,
    /// Target's degree at the moment of the draw.
    pub target_degree: u64,
}

/// State summary recorded at one checkpoint (step boundary, `k = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointSnapshot {
    pub n: usize,
    pub tracked: Vec<TrackedDegree>,
    /// Degree histogram as sorted `(degree, count)` pairs.
    pub histogram: Vec<(u64, u64)>,
    /// Inverse model: the normalizer `D` at this boundary.
    pub normalizer: Option<f64>,
    pub attachment_draw: Option<AttachmentDraw>,
}

/// Full output of one growth run.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRecord {
    pub variant: ModelVariant,
    pub m: u64,
    pub n_target: usize,
    pub snapshots: Vec<CheckpointSnapshot>,
}

impl GrowthRecord {
    /// The snapshot at vertex count `n`, if that checkpoint was recorded.
    pub fn snapshot_at(&self, n: usize) -> Option<&CheckpointSnapshot> {
        self.snapshots.iter().find(|s| s.n == n)
    }

    /// The snapshot at the growth target, which is always recorded.
    pub fn final_snapshot(&self) -> &CheckpointSnapshot {
        self.snapshots.last().expect("growth records always hold the target snapshot")
    }
}

/// Grows a graph from the initial configuration to `config.n_target`,
/// recording a snapshot at every checkpoint.
pub fn grow<R: Rng + ?Sized>(config: &GrowConfig, rng: &mut R) -> CoreResult<GrowthRecord> {
    if config.n_target < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "n_target must be >= 2, got {}",
            config.n_target
        )));
    }
    let checkpoints = config.normalized_checkpoints()?;
    let mut state = GraphState::init(config.m, config.variant)?;
    let mut snapshots: Vec<CheckpointSnapshot> = Vec::with_capacity(checkpoints.len());
    let mut next_cp = 0usize;
    // Index into `snapshots` of a checkpoint waiting for its naive draw.
    let mut pending_draw: Option<usize> = None;

    if checkpoints[next_cp] == 2 {
        state.refresh_weights();
        snapshots.push(snapshot(&state, config));
        if config.record_attachment_draw {
            pending_draw = Some(snapshots.len() - 1);
        }
        next_cp += 1;
    }

    while state.n() < config.n_target {
        if let Some(idx) = pending_draw.take() {
            // Capture the first half-edge of this step as the checkpoint's
            // realized attachment draw.
            let j = state.sample_target(rng)?;
            snapshots[idx].attachment_draw =
                Some(AttachmentDraw { target_vertex: j, target_degree: state.degree(j)? });
            state.apply_attachment(j)?;
            for _ in 1..config.m {
                state.attach_half_edge(rng)?;
            }
            state.complete_vertex()?;
        } else {
            state.add_vertex(rng)?;
        }
        if next_cp < checkpoints.len() && state.n() == checkpoints[next_cp] {
            state.refresh_weights();
            state.check_invariants()?;
            snapshots.push(snapshot(&state, config));
            if config.record_attachment_draw {
                pending_draw = Some(snapshots.len() - 1);
            }
            next_cp += 1;
        }
    }

    // The target checkpoint has no following step; peek one unapplied draw.
    if let Some(idx) = pending_draw.take() {
        let j = state.sample_target(rng)?;
        snapshots[idx].attachment_draw =
            Some(AttachmentDraw { target_vertex: j, target_degree: state.degree(j)? });
    }

    Ok(GrowthRecord {
        variant: config.variant,
        m: config.m,
        n_target: config.n_target,
        snapshots,
    })
}

fn snapshot(state: &GraphState, config: &GrowConfig) -> CheckpointSnapshot {
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    for &d in state.degrees() {
        *histogram.entry(d).or_insert(0) += 1;
    }
    let tracked = config
        .tracked_vertices
        .iter()
        .filter(|&&v| v >= 1 && v <= state.n())
        .map(|&v| TrackedDegree { vertex: v, degree: state.degrees()[v - 1] })
        .collect();
    CheckpointSnapshot {
        n: state.n(),
        tracked,
        histogram: histogram.into_iter().collect(),
        normalizer: state.inverse_weight_sum(),
        attachment_draw: None,
    }
}
