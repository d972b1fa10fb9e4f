//! Flat key/value run configuration. Every key is optional in the file and
//! command-line flags win over file values.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fpid::diffusion::DiffusionParams;
use fpid::learners::LearnerSpec;
use fpid::orientation::OrientationParams;
use fpid::pipeline::ExtractionConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Directory of `<subject>_<impression>.<ext>` images.
    pub root: Option<PathBuf>,
    pub out: PathBuf,
    /// Feature table read by `evaluate`; defaults to `<out>/features.csv`.
    pub features: Option<PathBuf>,
    pub levels: usize,
    pub crop_size: usize,
    pub distances: Vec<usize>,
    pub block_size: usize,
    pub orientation_smoothing: f64,
    pub diffusion_sigma: f64,
    pub diffusion_rho: f64,
    pub diffusion_alpha: f64,
    pub diffusion_contrast: f64,
    pub diffusion_dt: f64,
    pub diffusion_steps: usize,
    pub folds: usize,
    pub seed: u64,
    pub learners: Vec<String>,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
    pub forest_trees: usize,
    /// Attributes drawn per node by random trees and forests; 0 selects
    /// `floor(log2 M) + 1`.
    pub k_features: usize,
    pub c45_confidence: f64,
    pub min_leaf: usize,
    pub rep_pruning_fraction: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let extraction = ExtractionConfig::default();
        let d = extraction.diffusion;
        PipelineConfig {
            root: None,
            out: PathBuf::from("fpid-out"),
            features: None,
            levels: extraction.levels,
            crop_size: extraction.crop_size,
            distances: extraction.distances,
            block_size: extraction.orientation.block_size,
            orientation_smoothing: extraction.orientation.smoothing_sigma,
            diffusion_sigma: d.sigma,
            diffusion_rho: d.rho,
            diffusion_alpha: d.alpha,
            diffusion_contrast: d.contrast,
            diffusion_dt: d.dt,
            diffusion_steps: d.steps,
            folds: 10,
            seed: 1,
            learners: LearnerSpec::DEFAULTS.iter().map(|s| s.key().to_string()).collect(),
            threads: 0,
            forest_trees: 100,
            k_features: 0,
            c45_confidence: 0.25,
            min_leaf: 2,
            rep_pruning_fraction: 1.0 / 3.0,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn extraction(&self) -> ExtractionConfig {
        ExtractionConfig {
            levels: self.levels,
            crop_size: self.crop_size,
            distances: self.distances.clone(),
            orientation: OrientationParams {
                block_size: self.block_size,
                smoothing_sigma: self.orientation_smoothing,
            },
            diffusion: DiffusionParams {
                sigma: self.diffusion_sigma,
                rho: self.diffusion_rho,
                alpha: self.diffusion_alpha,
                contrast: self.diffusion_contrast,
                dt: self.diffusion_dt,
                steps: self.diffusion_steps,
            },
        }
    }

    pub fn features_path(&self) -> PathBuf {
        self.features.clone().unwrap_or_else(|| self.out.join("features.csv"))
    }

    /// Learner list with the configured hyperparameters applied.
    pub fn learner_specs(&self) -> Result<Vec<LearnerSpec>> {
        if self.learners.is_empty() {
            bail!("no learners selected");
        }
        let k = (self.k_features > 0).then_some(self.k_features);
        self.learners
            .iter()
            .map(|name| {
                let spec: LearnerSpec = name.parse()?;
                Ok(match spec {
                    LearnerSpec::Stump => LearnerSpec::Stump,
                    LearnerSpec::RandomTree { .. } => LearnerSpec::RandomTree { k_features: k },
                    LearnerSpec::RepTree { .. } => LearnerSpec::RepTree {
                        pruning_fraction: self.rep_pruning_fraction,
                        min_leaf: self.min_leaf,
                    },
                    LearnerSpec::C45 { .. } => LearnerSpec::C45 {
                        confidence: self.c45_confidence,
                        min_leaf: self.min_leaf,
                    },
                    LearnerSpec::RandomForest { bootstrap, .. } => LearnerSpec::RandomForest {
                        n_trees: self.forest_trees,
                        k_features: k,
                        bootstrap,
                    },
                })
            })
            .collect()
    }
}
