//! Experiment configuration: defaults, config-file values, then CLI
//! overrides, resolved into one hashed record echoed in every report.

use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use depref_core::ModelVariant;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::thresholds::DEFAULT_SEED;

/// Fully resolved experiment parameters. Worker count is deliberately not
/// part of this: it affects scheduling, never results, and reports must be
/// byte-identical across worker counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelVariant,
    pub m: u64,
    pub n: usize,
    pub replicates: u64,
    pub seed: u64,
    /// Vertex counts at which state is recorded; empty means the target
    /// alone.
    pub checkpoints: Vec<usize>,
    /// Vertices whose degrees are tracked.
    pub track: Vec<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: ModelVariant::Linear,
            m: 1,
            n: 1_000,
            replicates: 100,
            seed: DEFAULT_SEED,
            checkpoints: Vec::new(),
            track: vec![1],
        }
    }
}

impl ExperimentConfig {
    /// Applies a partial layer (config file or CLI flags) on top of self.
    pub fn layered(mut self, layer: &PartialConfig) -> Result<Self> {
        if let Some(model) = &layer.model {
            self.model = ModelVariant::from_str(model)
                .with_context(|| format!("invalid model '{model}'"))?;
        }
        if let Some(m) = layer.m {
            self.m = m;
        }
        if let Some(n) = layer.n {
            self.n = n;
        }
        if let Some(replicates) = layer.replicates {
            self.replicates = replicates;
        }
        if let Some(seed) = layer.seed {
            self.seed = seed;
        }
        if let Some(checkpoints) = &layer.checkpoints {
            self.checkpoints = checkpoints.clone();
        }
        if let Some(track) = &layer.track {
            self.track = track.clone();
        }
        Ok(self)
    }

    /// Defaults, then the config file (if any), then CLI flags.
    pub fn resolve(file: Option<&Path>, flags: &PartialConfig) -> Result<Self> {
        let mut config = ExperimentConfig::default();
        if let Some(path) = file {
            let layer = PartialConfig::from_toml_file(path)?;
            config = config.layered(&layer)?;
        }
        config = config.layered(flags)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            bail!("m must be >= 1");
        }
        if self.n < 2 {
            bail!("n must be >= 2");
        }
        if self.replicates == 0 {
            bail!("replicates must be >= 1");
        }
        if self.track.iter().any(|&v| v == 0) {
            bail!("tracked vertices are 1-based");
        }
        if let Some(&cp) = self.checkpoints.iter().find(|&&cp| cp < 2 || cp > self.n) {
            bail!("checkpoint {cp} outside [2, {}]", self.n);
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON encoding, hex-encoded.
    pub fn hash(&self) -> String {
        let encoded = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&encoded);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// One layer of optional overrides, also the config-file schema.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub model: Option<String>,
    pub m: Option<u64>,
    pub n: Option<usize>,
    pub replicates: Option<u64>,
    pub seed: Option<u64>,
    pub checkpoints: Option<Vec<usize>>,
    pub track: Option<Vec<usize>>,
}

impl PartialConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
    }
}
