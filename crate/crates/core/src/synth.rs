//! Synthetic loop-type fingerprints for tests and demos.
//!
//! Ridges follow the level sets of `g = sqrt(r (r - u))` in coordinates
//! `(u, v)` centred on the core and rotated by the impression angle. The
//! level sets are nested U-shaped curves around the core, whose orientation
//! field carries a Poincaré index of +1/2, and `|grad g|` stays within
//! `[1/sqrt 2, sqrt 2]` so the ridge period varies by at most a factor of two.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{save_pgm, GrayImage};

/// Finger-specific appearance, shared by every impression of a subject.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubjectParams {
    /// Ridges per pixel along the gradient of `g`.
    pub frequency: f64,
    /// Base orientation of the loop in radians.
    pub rotation: f64,
    /// Ridge/valley amplitude in gray levels.
    pub contrast: f64,
    /// Mean gray level inside the print.
    pub brightness: f64,
    /// Exponent shaping the ridge profile; above 1 gives thin ridges.
    pub sharpness: f64,
}

impl SubjectParams {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        SubjectParams {
            frequency: rng.random_range(1.0 / 12.0..1.0 / 7.0),
            rotation: rng.random_range(-0.5..0.5),
            contrast: rng.random_range(40.0..100.0),
            brightness: rng.random_range(100.0..160.0),
            sharpness: rng.random_range(0.4..2.5),
        }
    }
}

/// Per-capture variation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpressionParams {
    /// Core position in pixels.
    pub core: (f64, f64),
    /// Added to the subject rotation.
    pub rotation: f64,
    /// Standard deviation of additive Gaussian noise in gray levels.
    pub noise: f64,
    /// Multiplies the subject contrast.
    pub pressure: f64,
}

impl ImpressionParams {
    pub fn centered(width: usize, height: usize) -> Self {
        ImpressionParams {
            core: (width as f64 / 2.0, height as f64 / 2.0),
            rotation: 0.0,
            noise: 0.0,
            pressure: 1.0,
        }
    }

    pub fn random<R: Rng>(rng: &mut R, width: usize, height: usize) -> Self {
        let (w, h) = (width as f64, height as f64);
        ImpressionParams {
            core: (
                w / 2.0 + rng.random_range(-0.08..0.08) * w,
                h / 2.0 + rng.random_range(-0.08..0.08) * h,
            ),
            rotation: rng.random_range(-0.15..0.15),
            noise: rng.random_range(4.0..14.0),
            pressure: rng.random_range(0.8..1.15),
        }
    }
}

/// Ridge phase function `sqrt(r (r - u))` at offset `(u, v)` from the core.
pub fn loop_phase(u: f64, v: f64) -> f64 {
    let r = u.hypot(v);
    (r * (r - u)).max(0.0).sqrt()
}

/// Renders one impression. The print fills an ellipse on a light background.
pub fn render<R: Rng>(
    width: usize,
    height: usize,
    subject: &SubjectParams,
    impression: &ImpressionParams,
    rng: &mut R,
) -> Result<GrayImage> {
    if width < 16 || height < 16 {
        return Err(Error::Dimensions { width, height });
    }
    let angle = subject.rotation + impression.rotation;
    let (sin, cos) = angle.sin_cos();
    let (cx, cy) = impression.core;
    let (ex, ey) = (width as f64 / 2.0, height as f64 / 2.0);
    let (rx, ry) = (width as f64 * 0.47, height as f64 * 0.49);
    let noise = Normal::new(0.0, impression.noise.max(0.0)).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let amplitude = subject.contrast * impression.pressure;
    let two_pi_f = std::f64::consts::TAU * subject.frequency;

    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let (dx, dy) = (x as f64 - cx, y as f64 - cy);
            // loop opens towards -v in image coordinates
            let u = cos * dy - sin * dx;
            let v = sin * dy + cos * dx;
            let wave = (two_pi_f * loop_phase(-u, v)).cos();
            let shaped = wave.signum() * wave.abs().powf(subject.sharpness);
            let e = ((x as f64 - ex) / rx).powi(2) + ((y as f64 - ey) / ry).powi(2);
            // soft print boundary
            let mask = (1.0 - e).clamp(0.0, 0.1) * 10.0;
            let inside = subject.brightness - amplitude * shaped;
            let value = mask * inside + (1.0 - mask) * 235.0 + noise.sample(rng);
            pixels.push(value);
        }
    }
    GrayImage::from_fn(width, height, |x, y| pixels[y * width + x])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub subjects: usize,
    pub impressions: usize,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            subjects: 10,
            impressions: 8,
            width: 192,
            height: 192,
            seed: 2002,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticImage {
    /// `<subject>_<impression>.pgm`, subjects numbered from 101.
    pub file_name: String,
    pub subject: usize,
    pub image: GrayImage,
    pub params: ImpressionParams,
}

/// Deterministic corpus for `spec.seed`.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<SyntheticImage>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let subjects: Vec<SubjectParams> = (0..spec.subjects).map(|_| SubjectParams::random(&mut rng)).collect();
    let mut out = Vec::with_capacity(spec.subjects * spec.impressions);
    for (s, subject) in subjects.iter().enumerate() {
        for i in 0..spec.impressions {
            let params = ImpressionParams::random(&mut rng, spec.width, spec.height);
            let image = render(spec.width, spec.height, subject, &params, &mut rng)?;
            out.push(SyntheticImage {
                file_name: format!("{}_{}.pgm", 101 + s, i + 1),
                subject: s,
                image,
                params,
            });
        }
    }
    Ok(out)
}

/// Writes the corpus as binary PGM files into `dir`, creating it if needed.
pub fn write_corpus(spec: &CorpusSpec, dir: &Path) -> Result<Vec<SyntheticImage>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let corpus = generate_corpus(spec)?;
    for item in &corpus {
        save_pgm(&item.image, &dir.join(&item.file_name))?;
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::{compute_orientation_field, detect_core};

    #[test]
    fn phase_gradient_is_bounded() {
        let h = 1e-6;
        for &(u, v) in &[(3.0, 4.0), (-10.0, 1.0), (0.5, -7.0), (20.0, 0.3)] {
            let gu = (loop_phase(u + h, v) - loop_phase(u - h, v)) / (2.0 * h);
            let gv = (loop_phase(u, v + h) - loop_phase(u, v - h)) / (2.0 * h);
            let g = gu.hypot(gv);
            assert!(g >= std::f64::consts::FRAC_1_SQRT_2 - 1e-6 && g <= std::f64::consts::SQRT_2 + 1e-6, "{g}");
        }
    }

    #[test]
    fn core_is_detected_near_planted_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let subject = SubjectParams {
            frequency: 0.1,
            rotation: 0.0,
            contrast: 80.0,
            brightness: 128.0,
            sharpness: 1.0,
        };
        let mut imp = ImpressionParams::centered(160, 160);
        imp.core = (84.0, 76.0);
        let img = render(160, 160, &subject, &imp, &mut rng).unwrap();
        let field = compute_orientation_field(&img, 8).unwrap();
        let core = detect_core(&field);
        assert!(!core.fallback);
        let d = ((core.x as f64 - 84.0).powi(2) + (core.y as f64 - 76.0).powi(2)).sqrt();
        assert!(d <= 16.0, "core at ({}, {})", core.x, core.y);
    }

    #[test]
    fn corpus_is_deterministic_and_named() {
        let spec = CorpusSpec {
            subjects: 2,
            impressions: 2,
            width: 48,
            height: 48,
            seed: 9,
        };
        let a = generate_corpus(&spec).unwrap();
        let b = generate_corpus(&spec).unwrap();
        let names: Vec<&str> = a.iter().map(|s| s.file_name.as_str()).collect();
        assert_eq!(names, ["101_1.pgm", "101_2.pgm", "102_1.pgm", "102_2.pgm"]);
        assert!(a.iter().zip(&b).all(|(x, y)| x.image == y.image));
    }
}
