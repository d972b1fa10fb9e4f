//! Browser bindings for three pipeline operations: synthesize a print,
//! estimate its orientation field and core, and extract the enhanced core
//! region with its texture descriptors.
//!
//! Every binding is a thin wrapper over a plain function that returns
//! `Result<_, String>`, so the logic is tested natively.

use fpid::diffusion::DiffusionParams;
use fpid::imaging::GrayImage;
use fpid::orientation::{compute_orientation_field_with, detect_core, CorePoint, OrientationParams};
use fpid::pipeline::{trace_features, ExtractionConfig};
use fpid::synth::{generate_corpus, CorpusSpec};
use fpid::texture::attribute_names;
use serde::Serialize;
use wasm_bindgen::prelude::*;

pub const MAX_SIDE: usize = 1024;

fn image(pixels: &[u8], width: usize, height: usize) -> Result<GrayImage, String> {
    if width > MAX_SIDE || height > MAX_SIDE {
        return Err(format!("image {width}x{height} exceeds {MAX_SIDE}x{MAX_SIDE}"));
    }
    GrayImage::from_u8(width, height, pixels).map_err(|e| e.to_string())
}

/// Gray bytes of one synthetic impression, `size` pixels square.
pub fn synthesize_gray(seed: u64, size: usize) -> Result<Vec<u8>, String> {
    if size > MAX_SIDE {
        return Err(format!("size {size} exceeds {MAX_SIDE}"));
    }
    let spec = CorpusSpec {
        subjects: 1,
        impressions: 1,
        width: size,
        height: size,
        seed,
    };
    let corpus = generate_corpus(&spec).map_err(|e| e.to_string())?;
    Ok(corpus[0].image.to_u8())
}

#[derive(Debug, Serialize)]
pub struct FieldView {
    pub blocks_x: usize,
    pub blocks_y: usize,
    pub block_size: usize,
    pub angles: Vec<f64>,
    pub coherences: Vec<f64>,
    pub core: CorePoint,
}

pub fn orientation_view(pixels: &[u8], width: usize, height: usize, block_size: usize) -> Result<FieldView, String> {
    let img = image(pixels, width, height)?;
    let params = OrientationParams {
        block_size,
        ..OrientationParams::default()
    };
    let field = compute_orientation_field_with(&img, &params).map_err(|e| e.to_string())?;
    let core = detect_core(&field);
    Ok(FieldView {
        blocks_x: field.blocks_x(),
        blocks_y: field.blocks_y(),
        block_size,
        angles: field.angles().to_vec(),
        coherences: field.coherences().to_vec(),
        core,
    })
}

#[derive(Debug, Serialize)]
pub struct ExtractionView {
    pub core: CorePoint,
    pub side: usize,
    /// Cropped region and its enhanced version, row-major gray bytes.
    pub region: Vec<u8>,
    pub enhanced: Vec<u8>,
    pub attributes: Vec<String>,
    pub values: Vec<f64>,
}

pub fn extraction_view(
    pixels: &[u8],
    width: usize,
    height: usize,
    steps: usize,
    levels: usize,
) -> Result<ExtractionView, String> {
    let img = image(pixels, width, height)?;
    let config = ExtractionConfig {
        levels,
        diffusion: DiffusionParams {
            steps,
            ..DiffusionParams::default()
        },
        ..ExtractionConfig::default()
    };
    let trace = trace_features(&img, &config, "demo").map_err(|e| e.to_string())?;
    Ok(ExtractionView {
        core: trace.core,
        side: trace.region.width(),
        region: trace.region.to_u8(),
        enhanced: trace.enhanced.to_u8(),
        attributes: attribute_names(),
        values: trace.features.values,
    })
}

fn to_js<T: Serialize>(value: &T) -> Result<String, JsValue> {
    serde_json::to_string(value).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn synthesize(seed: u32, size: usize) -> Result<Vec<u8>, JsValue> {
    synthesize_gray(u64::from(seed), size).map_err(|e| JsValue::from_str(&e))
}

/// JSON `{blocks_x, blocks_y, block_size, angles, coherences, core}`.
#[wasm_bindgen]
pub fn orientation(pixels: &[u8], width: usize, height: usize, block_size: usize) -> Result<String, JsValue> {
    let view = orientation_view(pixels, width, height, block_size).map_err(|e| JsValue::from_str(&e))?;
    to_js(&view)
}

/// JSON `{core, side, region, enhanced, attributes, values}`.
#[wasm_bindgen]
pub fn extract(pixels: &[u8], width: usize, height: usize, steps: usize, levels: usize) -> Result<String, JsValue> {
    let view = extraction_view(pixels, width, height, steps, levels).map_err(|e| JsValue::from_str(&e))?;
    to_js(&view)
}
