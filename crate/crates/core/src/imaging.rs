//! Image ingestion, gray-level quantization and region cropping.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Gray-level count used for co-occurrence statistics unless configured.
pub const DEFAULT_LEVELS: usize = 8;

/// A row-major grid of real intensities in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimensions { width, height });
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some(v) = pixels.iter().find(|v| !(0.0..=255.0).contains(*v)) {
            return Err(Error::InvalidArgument(format!(
                "intensity {v} outside [0, 255]"
            )));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y).clamp(0.0, 255.0));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn from_u8(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(width, height, bytes.iter().map(|&b| b as f64).collect())
    }

    /// Builds an image from raw values, clamping them into `[0, 255]`.
    pub(crate) fn from_clamped(width: usize, height: usize, pixels: Vec<f64>) -> Self {
        debug_assert_eq!(pixels.len(), width * height);
        GrayImage {
            width,
            height,
            pixels: pixels.into_iter().map(|v| v.clamp(0.0, 255.0)).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }

    /// Intensities rounded to the nearest byte.
    pub fn to_u8(&self) -> Vec<u8> {
        self.pixels.iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect()
    }

    /// Copy rotated by 90 degrees counter-clockwise as displayed.
    pub fn rotate90(&self) -> GrayImage {
        let (w, h) = (self.width, self.height);
        let mut pixels = Vec::with_capacity(w * h);
        for y in 0..w {
            for x in 0..h {
                pixels.push(self.get(w - 1 - y, x));
            }
        }
        GrayImage {
            width: h,
            height: w,
            pixels,
        }
    }
}

/// Integer gray-level bins in `[0, levels)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedImage {
    width: usize,
    height: usize,
    levels: usize,
    bins: Vec<u16>,
}

impl QuantizedImage {
    pub fn new(width: usize, height: usize, levels: usize, bins: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimensions { width, height });
        }
        if levels < 2 || levels > u16::MAX as usize {
            return Err(Error::InvalidArgument(format!("gray levels {levels}")));
        }
        if bins.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} bins for a {width}x{height} image",
                bins.len()
            )));
        }
        if let Some(b) = bins.iter().find(|&&b| b as usize >= levels) {
            return Err(Error::InvalidArgument(format!(
                "bin {b} not below {levels} levels"
            )));
        }
        Ok(QuantizedImage {
            width,
            height,
            levels,
            bins,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn bins(&self) -> &[u16] {
        &self.bins
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.bins[y * self.width + x] as usize
    }
}

/// Pixel position, `x` along columns and `y` along rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PixelCoord {
    pub x: usize,
    pub y: usize,
}

/// Bin of a single intensity: `floor(v * K / 256)` clamped to `K - 1`.
#[inline]
pub fn quantize_value(intensity: f64, levels: usize) -> usize {
    let bin = (intensity * levels as f64 / 256.0).floor();
    if bin <= 0.0 {
        0
    } else {
        (bin as usize).min(levels - 1)
    }
}

pub fn quantize(img: &GrayImage, levels: usize) -> Result<QuantizedImage> {
    if levels < 2 || levels > u16::MAX as usize {
        return Err(Error::InvalidArgument(format!(
            "gray levels must be at least 2, got {levels}"
        )));
    }
    let bins = img
        .pixels
        .iter()
        .map(|&v| quantize_value(v, levels) as u16)
        .collect();
    Ok(QuantizedImage {
        width: img.width,
        height: img.height,
        levels,
        bins,
    })
}

/// Cuts a `size`×`size` window centred on `center`. Windows that would leave
/// the image are translated back inside rather than shrunk or padded.
pub fn crop_region(img: &GrayImage, center: PixelCoord, size: usize) -> Result<GrayImage> {
    if size == 0 {
        return Err(Error::InvalidArgument("crop size must be positive".into()));
    }
    if size > img.width || size > img.height {
        return Err(Error::InvalidArgument(format!(
            "crop size {size} exceeds image {}x{}",
            img.width, img.height
        )));
    }
    let origin = |c: usize, extent: usize| c.saturating_sub(size / 2).min(extent - size);
    let x0 = origin(center.x, img.width);
    let y0 = origin(center.y, img.height);
    let mut pixels = Vec::with_capacity(size * size);
    for y in y0..y0 + size {
        let row = y * img.width;
        pixels.extend_from_slice(&img.pixels[row + x0..row + x0 + size]);
    }
    Ok(GrayImage {
        width: size,
        height: size,
        pixels,
    })
}

/// Loads a grayscale raster. Binary PGM is always supported; 8-bit grayscale
/// PNG and TIFF are read when the `raster` feature is enabled.
pub fn load_grayscale(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(b"P5") {
        return decode_pgm(&bytes);
    }
    decode_raster(&bytes)
}

#[cfg(feature = "raster")]
fn decode_raster(bytes: &[u8]) -> Result<GrayImage> {
    use image::{ColorType, DynamicImage};

    let decoded =
        image::load_from_memory(bytes).map_err(|e| Error::Format(e.to_string()))?;
    match decoded.color() {
        ColorType::L8 => {}
        other => {
            return Err(Error::Format(format!(
                "expected 8-bit grayscale, found {other:?}"
            )))
        }
    }
    let DynamicImage::ImageLuma8(buf) = decoded else {
        return Err(Error::Format("expected 8-bit grayscale".into()));
    };
    GrayImage::from_u8(buf.width() as usize, buf.height() as usize, buf.as_raw())
}

#[cfg(not(feature = "raster"))]
fn decode_raster(_bytes: &[u8]) -> Result<GrayImage> {
    Err(Error::Format("only binary PGM (P5) is supported in this build".into()))
}

/// Parses a binary (P5) PGM with maxval at most 255.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos).ok_or_else(|| truncated("magic"))?;
    if magic != b"P5" {
        return Err(Error::Format("not a binary PGM (expected P5)".into()));
    }
    let width = parse_header_number(bytes, &mut pos, "width")?;
    let height = parse_header_number(bytes, &mut pos, "height")?;
    let maxval = parse_header_number(bytes, &mut pos, "maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Dimensions { width, height });
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::Format(format!("unsupported PGM maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let len = width * height;
    let raster = bytes
        .get(pos..pos + len)
        .ok_or_else(|| truncated("raster"))?;
    let scale = 255.0 / maxval as f64;
    let pixels = raster.iter().map(|&b| (b as f64 * scale).min(255.0)).collect();
    GrayImage::new(width, height, pixels)
}

fn truncated(what: &str) -> Error {
    Error::Format(format!("truncated PGM ({what})"))
}

fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (*pos > start && *pos < bytes.len()).then(|| &bytes[start..*pos])
}

fn parse_header_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let token = next_token(bytes, pos).ok_or_else(|| truncated(what))?;
    std::str::from_utf8(token)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Format(format!("bad PGM {what}")))
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.to_u8());
    out
}

pub fn save_pgm(img: &GrayImage, path: &Path) -> Result<()> {
    fs::write(path, encode_pgm(img)).map_err(|e| Error::io(path, e))
}

/// Writes an 8-bit RGB PNG.
#[cfg(feature = "raster")]
pub fn save_rgb_png(width: usize, height: usize, rgb: &[u8], path: &Path) -> Result<()> {
    image::save_buffer(
        path,
        rgb,
        width as u32,
        height as u32,
        image::ExtendedColorType::Rgb8,
    )
    .map_err(|e| Error::Format(e.to_string()))
}
