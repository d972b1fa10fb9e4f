//! Per-image feature extraction: core detection, crop, enhancement,
//! quantization and co-occurrence descriptors.

use serde::{Deserialize, Serialize};

use crate::diffusion::{enhance, DiffusionParams};
use crate::error::{Error, Result};
use crate::imaging::{crop_region, quantize, GrayImage, QuantizedImage, DEFAULT_LEVELS};
use crate::orientation::{
    compute_orientation_field_with, detect_core, CorePoint, OrientationField, OrientationParams,
};
use crate::texture::{descriptor_vector, FeatureVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractionConfig {
    pub levels: usize,
    pub crop_size: usize,
    pub distances: Vec<usize>,
    pub orientation: OrientationParams,
    pub diffusion: DiffusionParams,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            levels: DEFAULT_LEVELS,
            crop_size: 100,
            distances: vec![1, 2, 3],
            orientation: OrientationParams::default(),
            diffusion: DiffusionParams::default(),
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels < 2 {
            return Err(Error::InvalidArgument(format!("levels {} < 2", self.levels)));
        }
        if self.crop_size == 0 {
            return Err(Error::InvalidArgument("crop size must be positive".into()));
        }
        if self.distances.is_empty() || self.distances.contains(&0) {
            return Err(Error::InvalidArgument(
                "distances must be a non-empty list of positive integers".into(),
            ));
        }
        self.diffusion.validate()
    }
}

/// Every intermediate product of one extraction, for inspection.
#[derive(Debug, Clone)]
pub struct ExtractionTrace {
    pub field: OrientationField,
    pub core: CorePoint,
    pub region: GrayImage,
    pub enhanced: GrayImage,
    pub quantized: QuantizedImage,
    pub features: FeatureVector,
}

pub fn trace_features(img: &GrayImage, config: &ExtractionConfig, label: &str) -> Result<ExtractionTrace> {
    config.validate()?;
    let field = compute_orientation_field_with(img, &config.orientation)?;
    let core = detect_core(&field);
    let region = crop_region(img, core.coord(), config.crop_size)?;
    let enhanced = enhance(&region, &config.diffusion)?;
    let quantized = quantize(&enhanced, config.levels)?;
    let features = descriptor_vector(&quantized, &config.distances, label)?;
    Ok(ExtractionTrace {
        field,
        core,
        region,
        enhanced,
        quantized,
        features,
    })
}

pub fn extract_features(img: &GrayImage, config: &ExtractionConfig, label: &str) -> Result<FeatureVector> {
    trace_features(img, config, label).map(|t| t.features)
}
