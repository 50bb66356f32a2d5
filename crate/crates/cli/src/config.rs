//! Run configuration: paper-era defaults, optional TOML config file, and
//! command-line overrides (flags win over file values).

use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

/// Every tunable parameter of the pipelines, with reproducible defaults.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct RunConfig {
    /// Single seed feeding all randomness (clustering, layout).
    pub seed: u64,
    /// Minimum citation count for a link to be kept.
    pub min_weight: u64,
    /// Similarity edges must exceed this cosine value (strict).
    pub cosine_threshold: f64,
    /// Louvain resolution; 1 = plain modularity.
    pub resolution: f64,
    /// Layout iteration cap.
    pub max_iter: usize,
    /// Similarity needed before a fuzzy pair is considered at all.
    pub fuzzy_threshold: f64,
    pub auto_outliers: bool,
    /// Auto outliers: distance from centroid > factor * median distance.
    pub outlier_factor: f64,
    /// Presentation-only rotation in degrees, counter-clockwise.
    pub rotate: f64,
    pub flip_x: bool,
    pub flip_y: bool,
    /// Warn when the giant component covers less than this share.
    pub min_component_share: f64,
    /// Rows in rank-difference tables.
    pub top_k: usize,
    /// Keep the diagonal in the citing vectors.
    pub include_self_citations: bool,
    /// Fuzzy fallback when resolving document titles.
    pub fuzzy_resolve: bool,
    pub label_a: String,
    pub label_b: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            min_weight: 2,
            cosine_threshold: 0.2,
            resolution: 1.0,
            max_iter: 500,
            fuzzy_threshold: 0.9,
            auto_outliers: false,
            outlier_factor: 10.0,
            rotate: 0.0,
            flip_x: false,
            flip_y: false,
            min_component_share: 0.5,
            top_k: 20,
            include_self_citations: false,
            fuzzy_resolve: false,
            label_a: "A".to_string(),
            label_b: "B".to_string(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: RunConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        Ok(config)
    }
}

/// Flags shared by every subcommand; `None` means "use the config value".
#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: std::path::PathBuf,

    /// TOML config file; command-line flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<std::path::PathBuf>,

    /// Seed for all randomness (clustering and layout).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Display label for database A.
    #[arg(long)]
    pub label_a: Option<String>,

    /// Display label for database B.
    #[arg(long)]
    pub label_b: Option<String>,
}

impl CommonArgs {
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(label) = &self.label_a {
            config.label_a = label.clone();
        }
        if let Some(label) = &self.label_b {
            config.label_b = label.clone();
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_documented_choices() {
        let config = RunConfig::default();
        assert_eq!(config.min_weight, 2);
        assert_eq!(config.cosine_threshold, 0.2);
        assert_eq!(config.fuzzy_threshold, 0.9);
        assert_eq!(config.resolution, 1.0);
    }

    #[test]
    fn partial_toml_fills_in_defaults() {
        let config: RunConfig = toml::from_str("seed = 7\ncosine_threshold = 0.0\n").unwrap();
        assert_eq!(config.seed, 7);
        assert_eq!(config.cosine_threshold, 0.0);
        assert_eq!(config.min_weight, 2);
    }
}
