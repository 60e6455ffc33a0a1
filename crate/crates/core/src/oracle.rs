//! Exact expectation oracles: closed recursions for the linear model and
//! exhaustive enumeration for small graphs of either model.
//!
//! The recursions run in `f64` for arbitrary sizes and in exact rational
//! arithmetic up to a size cap, so floating-point tables can be validated
//! against exact values at the crossover.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{CoreError, CoreResult};
use crate::model::ModelVariant;

/// Largest vertex count for the exact rational recursions; denominators
/// grow to thousands of digits beyond this.
pub const EXACT_RECURSION_CAP: usize = 1_000;

/// Default ceiling on the number of attachment histories enumerated by the
/// brute-force distribution.
pub const BRUTE_FORCE_HISTORY_CAP: u128 = 1_000_000;

/// How the tracked vertex's starting degree is chosen.
///
/// `ConfigurationAccurate` matches the simulator's initial configuration
/// `[2m, m]`: vertex 1 starts at `2m`, vertex 2 at `m`. `GenericEntry`
/// gives every vertex the entry degree `m`, the convention under which the
/// trajectory limit statements are uniform in the vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitConvention {
    ConfigurationAccurate,
    GenericEntry,
}

/// Vertex count at which vertex `i` first exists.
pub fn entry_vertex_count(vertex: usize) -> usize {
    vertex.max(2)
}

fn entry_degree(m: u64, vertex: usize, convention: InitConvention) -> f64 {
    match (convention, vertex) {
        (InitConvention::ConfigurationAccurate, 1) => 2 * m,
        _ => m,
    }
    .to_f64()
    .expect("degree fits in f64")
}

/// Per-step coefficients of the linear-model degree expectation recursion:
/// `E[d(n+1)] = alpha * E[d(n)] + beta / (n-1)`, obtained by composing the
/// per-half-edge map `d -> d (1 - 1/((n-1)(k + m(2n-1)))) + 1/(n-1)` over
/// `k = 0..m`.
fn step_coefficients(m: u64, n: u64) -> (f64, f64) {
    let base = m as f64 * (2 * n - 1) as f64;
    let nm1 = (n - 1) as f64;
    let mut alpha = 1.0;
    let mut beta = 0.0;
    // Walk half-edges last to first so `alpha` is the running suffix product.
    for k in (0..m).rev() {
        beta += alpha;
        alpha *= 1.0 - 1.0 / (nm1 * (k as f64 + base));
    }
    (alpha, beta)
}

fn step_coefficients_exact(m: u64, n: u64) -> (BigRational, BigRational) {
    let base = m * (2 * n - 1);
    let nm1 = n - 1;
    let mut alpha = BigRational::one();
    let mut beta = BigRational::zero();
    for k in (0..m).rev() {
        beta += &alpha;
        let denom = BigInt::from(nm1) * BigInt::from(k + base);
        alpha *= BigRational::new(&denom - BigInt::one(), denom);
    }
    (alpha, beta)
}

/// `E[d_i(n)]` for the linear model, with a cumulative variance bound,
/// tabulated from the vertex's entry up to `n_max`.
#[derive(Debug, Clone)]
pub struct DegreeExpectationTable {
    m: u64,
    vertex: usize,
    convention: InitConvention,
    entry_n: usize,
    /// `values[idx]` is `E[d_i(entry_n + idx)]`.
    values: Vec<f64>,
    /// Upper bound on `Var[d_i(entry_n + idx)]`: each growth step adds at
    /// most `m/(n-1)` since the half-edge indicators have variance below
    /// their means.
    variance_bounds: Vec<f64>,
}

impl DegreeExpectationTable {
    pub fn compute(
        m: u64,
        vertex: usize,
        convention: InitConvention,
        n_max: usize,
    ) -> CoreResult<Self> {
        if m == 0 || vertex == 0 {
            return Err(CoreError::InvalidParameter("need m >= 1 and vertex >= 1".into()));
        }
        let entry_n = entry_vertex_count(vertex);
        if n_max < entry_n {
            return Err(CoreError::InvalidParameter(format!(
                "n_max {n_max} precedes entry of vertex {vertex} at n = {entry_n}"
            )));
        }
        let mut values = Vec::with_capacity(n_max - entry_n + 1);
        let mut variance_bounds = Vec::with_capacity(n_max - entry_n + 1);
        let mut value = entry_degree(m, vertex, convention);
        let mut bound = 0.0;
        values.push(value);
        variance_bounds.push(bound);
        for n in entry_n..n_max {
            let (alpha, beta) = step_coefficients(m, n as u64);
            value = alpha * value + beta / (n as f64 - 1.0);
            bound += m as f64 / (n as f64 - 1.0);
            values.push(value);
            variance_bounds.push(bound);
        }
        Ok(DegreeExpectationTable { m, vertex, convention, entry_n, values, variance_bounds })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn convention(&self) -> InitConvention {
        self.convention
    }

    pub fn entry_n(&self) -> usize {
        self.entry_n
    }

    pub fn n_max(&self) -> usize {
        self.entry_n + self.values.len() - 1
    }

    pub fn expected_degree(&self, n: usize) -> CoreResult<f64> {
        self.index(n).map(|i| self.values[i])
    }

    pub fn variance_bound(&self, n: usize) -> CoreResult<f64> {
        self.index(n).map(|i| self.variance_bounds[i])
    }

    fn index(&self, n: usize) -> CoreResult<usize> {
        if n < self.entry_n || n > self.n_max() {
            return Err(CoreError::InvalidParameter(format!(
                "n = {n} outside tabulated range [{}, {}]",
                self.entry_n,
                self.n_max()
            )));
        }
        Ok(n - self.entry_n)
    }
}

/// Exact rational `E[d_i(n)]` for `n` from the vertex's entry to `n_max`
/// (capped at [`EXACT_RECURSION_CAP`]). Index 0 corresponds to the entry.
pub fn exact_expected_degree(
    m: u64,
    vertex: usize,
    convention: InitConvention,
    n_max: usize,
) -> CoreResult<Vec<BigRational>> {
    if m == 0 || vertex == 0 {
        return Err(CoreError::InvalidParameter("need m >= 1 and vertex >= 1".into()));
    }
    if n_max > EXACT_RECURSION_CAP {
        return Err(CoreError::InvalidParameter(format!(
            "exact recursion capped at n = {EXACT_RECURSION_CAP}, got {n_max}"
        )));
    }
    let entry_n = entry_vertex_count(vertex);
    if n_max < entry_n {
        return Err(CoreError::InvalidParameter(format!(
            "n_max {n_max} precedes entry of vertex {vertex} at n = {entry_n}"
        )));
    }
    let start = match (convention, vertex) {
        (InitConvention::ConfigurationAccurate, 1) => 2 * m,
        _ => m,
    };
    let mut values = Vec::with_capacity(n_max - entry_n + 1);
    let mut value = BigRational::from_integer(BigInt::from(start));
    values.push(value.clone());
    for n in entry_n..n_max {
        let (alpha, beta) = step_coefficients_exact(m, n as u64);
        value = alpha * value + beta / BigRational::from_integer(BigInt::from(n as u64 - 1));
        values.push(value.clone());
    }
    Ok(values)
}

/// `E[N_k(n)]` for the linear model with `m = 1`: expected number of
/// degree-`k` vertices, from the per-step transfer
/// `E[N_k(n+1)] = (1 - q_k) E[N_k(n)] + q_{k-1}' E[N_{k-1}(n)] + 1_{k=1}`
/// with `q_k = (1/(n-1))(1 - k/(2n-1))`.
#[derive(Debug, Clone)]
pub struct NkExpectationTable {
    n: usize,
    /// `counts[k-1]` is `E[N_k(n)]`, for `k = 1..=n`.
    counts: Vec<f64>,
}

impl NkExpectationTable {
    pub fn compute(n_target: usize) -> CoreResult<Self> {
        if n_target < 2 {
            return Err(CoreError::InvalidParameter("n_target must be >= 2".into()));
        }
        // Initial configuration: degrees [2, 1].
        let mut counts = vec![1.0, 1.0];
        for n in 2..n_target {
            let nf = n as f64;
            let denom = 2.0 * nf - 1.0;
            let mut next = vec![0.0; n + 1];
            for k in 1..=n + 1 {
                let kf = k as f64;
                let stay = if k <= n {
                    (1.0 - (1.0 - kf / denom) / (nf - 1.0)) * counts[k - 1]
                } else {
                    0.0
                };
                let gain = if k >= 2 && k - 1 <= n {
                    ((1.0 - (kf - 1.0) / denom) / (nf - 1.0)) * counts[k - 2]
                } else {
                    0.0
                };
                next[k - 1] = stay + gain + if k == 1 { 1.0 } else { 0.0 };
            }
            counts = next;
        }
        Ok(NkExpectationTable { n: n_target, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn expected_count(&self, k: usize) -> f64 {
        if k >= 1 && k <= self.counts.len() {
            self.counts[k - 1]
        } else {
            0.0
        }
    }

    /// Deviation of the expected count from the limiting proportion
    /// `2^{-k}`: `E[N_k(n)] - n 2^{-k}`. Stays bounded in `n`.
    pub fn limit_deviation(&self, k: usize) -> f64 {
        self.expected_count(k) - self.n as f64 * 0.5f64.powi(k as i32)
    }
}

/// Exact rational `E[N_k(n_target)]` for `m = 1`, `k = 1..=n_target`.
///
/// Rows share the common denominator `Q_n = prod (j-1)(2j-1)`, so the step
/// is integer arithmetic on numerators:
/// `u_k' = (D - (2n-1) + k) u_k + (2n - k) u_{k-1} + 1_{k=1} D Q_n` with
/// `D = (n-1)(2n-1)`.
pub fn exact_expected_counts(n_target: usize) -> CoreResult<Vec<BigRational>> {
    if n_target < 2 {
        return Err(CoreError::InvalidParameter("n_target must be >= 2".into()));
    }
    if n_target > EXACT_RECURSION_CAP {
        return Err(CoreError::InvalidParameter(format!(
            "exact recursion capped at n = {EXACT_RECURSION_CAP}, got {n_target}"
        )));
    }
    let mut numerators = vec![BigInt::one(), BigInt::one()];
    let mut denom = BigInt::one();
    for n in 2..n_target {
        let n = n as u64;
        let d = BigInt::from((n - 1) * (2 * n - 1));
        let mut next = vec![BigInt::zero(); numerators.len() + 1];
        for k in 1..=numerators.len() + 1 {
            let ku = k as u64;
            let mut value = BigInt::zero();
            if k <= numerators.len() {
                value += (&d - BigInt::from(2 * n - 1 - ku)) * &numerators[k - 1];
            }
            if k >= 2 && k - 1 <= numerators.len() {
                value += BigInt::from(2 * n - ku) * &numerators[k - 2];
            }
            if k == 1 {
                value += &d * &denom;
            }
            next[k - 1] = value;
        }
        numerators = next;
        denom *= d;
    }
    Ok(numerators
        .into_iter()
        .map(|u| BigRational::new(u, denom.clone()))
        .collect())
}

/// Converts a rational with arbitrarily large parts to `f64` by shifting
/// numerator and denominator into range first. The stock conversion routes
/// both parts through `f64` directly and collapses to `NaN` once either
/// exceeds its range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let shift_n = r.numer().bits().saturating_sub(64);
    let shift_d = r.denom().bits().saturating_sub(64);
    let top = (r.numer() >> shift_n as usize).to_f64().expect("shifted numerator fits");
    let bot = (r.denom() >> shift_d as usize).to_f64().expect("shifted denominator fits");
    let scale = shift_n as i64 - shift_d as i64;
    if scale < f64::MIN_EXP as i64 - 64 {
        return 0.0;
    }
    (top / bot) * 2.0f64.powi(scale as i32)
}

/// Exact distribution of the final degree sequence, obtained by summing
/// the probability of every attachment history. Feasible only for a few
/// vertices; the default budget is [`BRUTE_FORCE_HISTORY_CAP`].
#[derive(Debug, Clone)]
pub struct BruteForceDistribution {
    variant: ModelVariant,
    m: u64,
    n_target: usize,
    law: BTreeMap<Vec<u64>, BigRational>,
}

impl BruteForceDistribution {
    pub fn compute(variant: ModelVariant, m: u64, n_target: usize) -> CoreResult<Self> {
        Self::with_history_cap(variant, m, n_target, BRUTE_FORCE_HISTORY_CAP)
    }

    pub fn with_history_cap(
        variant: ModelVariant,
        m: u64,
        n_target: usize,
        cap: u128,
    ) -> CoreResult<Self> {
        if m == 0 || n_target < 2 {
            return Err(CoreError::InvalidParameter("need m >= 1 and n_target >= 2".into()));
        }
        let mut histories: u128 = 1;
        for n in 2..n_target {
            for _ in 0..m {
                histories = histories.checked_mul(n as u128).unwrap_or(u128::MAX);
            }
            if histories > cap {
                return Err(CoreError::EnumerationTooLarge { histories, cap });
            }
        }
        let mut law = BTreeMap::new();
        let mut degrees = vec![2 * m, m];
        enumerate(variant, m, n_target, &mut degrees, 0, BigRational::one(), &mut law);
        Ok(BruteForceDistribution { variant, m, n_target, law })
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n_target(&self) -> usize {
        self.n_target
    }

    /// The exact law as sorted `(degree sequence, probability)` pairs.
    pub fn law(&self) -> &BTreeMap<Vec<u64>, BigRational> {
        &self.law
    }

    /// Sums to exactly 1 when the enumeration is correct.
    pub fn total_probability(&self) -> BigRational {
        self.law.values().sum()
    }

    /// Exact `E[d_i(n_target)]`.
    pub fn expected_degree(&self, vertex: usize) -> CoreResult<BigRational> {
        if vertex == 0 || vertex > self.n_target {
            return Err(CoreError::VertexOutOfRange { vertex, n: self.n_target });
        }
        Ok(self
            .law
            .iter()
            .map(|(seq, p)| p * BigRational::from_integer(BigInt::from(seq[vertex - 1])))
            .sum())
    }

    /// Exact `E[N_k(n_target)]`.
    pub fn expected_count(&self, k: u64) -> BigRational {
        self.law
            .iter()
            .map(|(seq, p)| {
                let hits = seq.iter().filter(|&&d| d == k).count();
                p * BigRational::from_integer(BigInt::from(hits))
            })
            .sum()
    }

    /// Exact marginal law of a single vertex's degree.
    pub fn degree_marginal(&self, vertex: usize) -> CoreResult<BTreeMap<u64, BigRational>> {
        if vertex == 0 || vertex > self.n_target {
            return Err(CoreError::VertexOutOfRange { vertex, n: self.n_target });
        }
        let mut marginal: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (seq, p) in &self.law {
            *marginal.entry(seq[vertex - 1]).or_insert_with(BigRational::zero) += p;
        }
        Ok(marginal)
    }
}

fn attach_prob_exact(variant: ModelVariant, degrees: &[u64], k: u64, m: u64, j: usize) -> BigRational {
    let n = degrees.len() as u64;
    match variant {
        ModelVariant::Linear => {
            let total = k + m * (2 * n - 1);
            BigRational::new(
                BigInt::from(total - degrees[j]),
                BigInt::from(n - 1) * BigInt::from(total),
            )
        }
        ModelVariant::Inverse => {
            let normalizer: BigRational = degrees
                .iter()
                .map(|&d| BigRational::new(BigInt::one(), BigInt::from(d)))
                .sum();
            BigRational::new(BigInt::one(), BigInt::from(degrees[j])) / normalizer
        }
    }
}

fn enumerate(
    variant: ModelVariant,
    m: u64,
    n_target: usize,
    degrees: &mut Vec<u64>,
    k: u64,
    prob: BigRational,
    law: &mut BTreeMap<Vec<u64>, BigRational>,
) {
    if k == m {
        degrees.push(m);
        if degrees.len() == n_target {
            *law.entry(degrees.clone()).or_insert_with(BigRational::zero) += prob;
        } else {
            enumerate(variant, m, n_target, degrees, 0, prob, law);
        }
        degrees.pop();
        return;
    }
    if degrees.len() == n_target {
        // Target already reached before any half-edge of the next step.
        *law.entry(degrees.clone()).or_insert_with(BigRational::zero) += prob;
        return;
    }
    for j in 0..degrees.len() {
        let p = attach_prob_exact(variant, degrees, k, m, j);
        degrees[j] += 1;
        enumerate(variant, m, n_target, degrees, k + 1, &prob * &p, law);
        degrees[j] -= 1;
    }
}
