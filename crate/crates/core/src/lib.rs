//! Texture-based fingerprint identification.
//!
//! The pipeline locates the fingerprint core from a blockwise orientation
//! field, crops a square region around it, enhances the region with
//! coherence-enhancing anisotropic diffusion, and summarises it with seven
//! gray-level co-occurrence statistics at four angles. The resulting
//! 28-attribute rows feed five decision-tree learners which are compared
//! under stratified cross-validation.

pub mod dataset;
pub mod diffusion;
pub mod error;
pub mod evaluation;
mod filter;
pub mod imaging;
pub mod learners;
pub mod orientation;
pub mod pipeline;
pub mod report;
pub mod synth;
pub mod texture;

pub use error::{Error, Result};
