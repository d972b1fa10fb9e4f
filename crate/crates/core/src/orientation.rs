//! Blockwise ridge orientation and Poincaré-index core detection.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{gaussian_blur, reflect};
use crate::imaging::{GrayImage, PixelCoord};

/// Acceptance band around +1/2 for a block to count as a core candidate.
pub const CORE_INDEX_TOLERANCE: f64 = 0.1;

/// The closed 8-neighbour ring as (d_col, d_row), ordered by increasing
/// `atan2(d_row, d_col)`.
const RING: [(isize, isize); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientationParams {
    pub block_size: usize,
    /// Gaussian scale, in blocks, applied to the doubled-angle field.
    pub smoothing_sigma: f64,
}

impl Default for OrientationParams {
    fn default() -> Self {
        OrientationParams {
            block_size: 8,
            smoothing_sigma: 1.0,
        }
    }
}

/// Dominant ridge angle in `[0, π)` and gradient coherence in `[0, 1]`
/// per block.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationField {
    blocks_x: usize,
    blocks_y: usize,
    block_size: usize,
    image_width: usize,
    image_height: usize,
    angles: Vec<f64>,
    coherence: Vec<f64>,
}

impl OrientationField {
    /// Builds a field from explicit per-block values (row-major). Angles are
    /// folded into `[0, π)`.
    pub fn from_angles(
        blocks_x: usize,
        blocks_y: usize,
        block_size: usize,
        angles: Vec<f64>,
        coherence: Vec<f64>,
    ) -> Result<Self> {
        if blocks_x == 0 || blocks_y == 0 || block_size == 0 {
            return Err(Error::Dimensions {
                width: blocks_x,
                height: blocks_y,
            });
        }
        let n = blocks_x * blocks_y;
        if angles.len() != n || coherence.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} blocks, got {} angles and {} coherence values",
                angles.len(),
                coherence.len()
            )));
        }
        if angles.iter().chain(&coherence).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite orientation".into()));
        }
        Ok(OrientationField {
            blocks_x,
            blocks_y,
            block_size,
            image_width: blocks_x * block_size,
            image_height: blocks_y * block_size,
            angles: angles.into_iter().map(fold_angle).collect(),
            coherence: coherence.into_iter().map(|c| c.clamp(0.0, 1.0)).collect(),
        })
    }

    pub fn blocks_x(&self) -> usize {
        self.blocks_x
    }

    pub fn blocks_y(&self) -> usize {
        self.blocks_y
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn image_size(&self) -> (usize, usize) {
        (self.image_width, self.image_height)
    }

    pub fn angle(&self, row: usize, col: usize) -> f64 {
        self.angles[row * self.blocks_x + col]
    }

    pub fn coherence(&self, row: usize, col: usize) -> f64 {
        self.coherence[row * self.blocks_x + col]
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn coherences(&self) -> &[f64] {
        &self.coherence
    }

    pub fn block_center(&self, row: usize, col: usize) -> PixelCoord {
        PixelCoord {
            x: col * self.block_size + self.block_size / 2,
            y: row * self.block_size + self.block_size / 2,
        }
    }

    fn has_full_ring(&self, row: usize, col: usize) -> bool {
        row >= 1 && col >= 1 && row + 1 < self.blocks_y && col + 1 < self.blocks_x
    }

    /// `row,col,angle,coherence` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,angle,coherence\n");
        for row in 0..self.blocks_y {
            for col in 0..self.blocks_x {
                let _ = writeln!(
                    out,
                    "{row},{col},{},{}",
                    self.angle(row, col),
                    self.coherence(row, col)
                );
            }
        }
        out
    }
}

fn fold_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    // rem_euclid can round up to exactly π
    if t >= PI {
        0.0
    } else {
        t
    }
}

/// Difference of two orientations wrapped into `(-π/2, π/2]`.
pub fn wrap_orientation_delta(d: f64) -> f64 {
    let mut d = d.rem_euclid(PI);
    if d > FRAC_PI_2 {
        d -= PI;
    }
    d
}

pub fn compute_orientation_field(img: &GrayImage, block_size: usize) -> Result<OrientationField> {
    compute_orientation_field_with(
        img,
        &OrientationParams {
            block_size,
            ..OrientationParams::default()
        },
    )
}

/// Gradient-moment orientation estimate: Sobel gradients are accumulated into
/// per-block `(Σgx², Σgy², Σgxgy)`, the resulting doubled-angle field is
/// Gaussian-smoothed over blocks, and the ridge angle is taken orthogonal to
/// the dominant gradient direction.
pub fn compute_orientation_field_with(
    img: &GrayImage,
    params: &OrientationParams,
) -> Result<OrientationField> {
    let bs = params.block_size;
    if bs < 4 {
        return Err(Error::InvalidArgument(format!(
            "block size must be at least 4, got {bs}"
        )));
    }
    let (w, h) = (img.width(), img.height());
    let (bx, by) = (w / bs, h / bs);
    if bx == 0 || by == 0 {
        return Err(Error::InvalidArgument(format!(
            "image {w}x{h} is smaller than one {bs}x{bs} block"
        )));
    }

    let px = |x: isize, y: isize| img.get(reflect(x, w), reflect(y, h));
    let mut gxx = vec![0.0; bx * by];
    let mut gyy = vec![0.0; bx * by];
    let mut gxy = vec![0.0; bx * by];
    for y in 0..by * bs {
        for x in 0..bx * bs {
            let (xi, yi) = (x as isize, y as isize);
            let gx = (px(xi + 1, yi - 1) + 2.0 * px(xi + 1, yi) + px(xi + 1, yi + 1)
                - px(xi - 1, yi - 1)
                - 2.0 * px(xi - 1, yi)
                - px(xi - 1, yi + 1))
                / 8.0;
            let gy = (px(xi - 1, yi + 1) + 2.0 * px(xi, yi + 1) + px(xi + 1, yi + 1)
                - px(xi - 1, yi - 1)
                - 2.0 * px(xi, yi - 1)
                - px(xi + 1, yi - 1))
                / 8.0;
            let b = (y / bs) * bx + x / bs;
            gxx[b] += gx * gx;
            gyy[b] += gy * gy;
            gxy[b] += gx * gy;
        }
    }

    let sigma = params.smoothing_sigma;
    let gxx = gaussian_blur(&gxx, bx, by, sigma);
    let gyy = gaussian_blur(&gyy, bx, by, sigma);
    let gxy = gaussian_blur(&gxy, bx, by, sigma);

    let mut angles = Vec::with_capacity(bx * by);
    let mut coherence = Vec::with_capacity(bx * by);
    for i in 0..bx * by {
        let diff = gxx[i] - gyy[i];
        let cross = 2.0 * gxy[i];
        angles.push(fold_angle(0.5 * cross.atan2(diff) + FRAC_PI_2));
        let energy = gxx[i] + gyy[i];
        let c = if energy > 1e-12 {
            (diff * diff + cross * cross).sqrt() / energy
        } else {
            0.0
        };
        coherence.push(c.clamp(0.0, 1.0));
    }

    Ok(OrientationField {
        blocks_x: bx,
        blocks_y: by,
        block_size: bs,
        image_width: w,
        image_height: h,
        angles,
        coherence,
    })
}

/// Total orientation rotation around the closed 8-neighbour ring of block
/// `(row, col)`, in turns. A core-type singularity gives +1/2, a delta -1/2.
pub fn poincare_index(field: &OrientationField, row: usize, col: usize) -> Result<f64> {
    if row >= field.blocks_y || col >= field.blocks_x || !field.has_full_ring(row, col) {
        return Err(Error::InvalidArgument(format!(
            "block ({row}, {col}) has no complete neighbour ring"
        )));
    }
    let at = |(dc, dr): (isize, isize)| {
        field.angle((row as isize + dr) as usize, (col as isize + dc) as usize)
    };
    let total: f64 = (0..RING.len())
        .map(|k| wrap_orientation_delta(at(RING[(k + 1) % RING.len()]) - at(RING[k])))
        .sum();
    Ok(total / (2.0 * PI))
}

/// Rotation around the elementary cell whose corners are the centres of
/// blocks `(row, col)`, `(row, col+1)`, `(row+1, col+1)` and `(row+1, col)`.
/// Cells tile the block lattice, so summing over all of them counts each
/// enclosed singularity exactly once.
pub fn cell_index(field: &OrientationField, row: usize, col: usize) -> Result<f64> {
    if row + 1 >= field.blocks_y || col + 1 >= field.blocks_x {
        return Err(Error::InvalidArgument(format!(
            "cell ({row}, {col}) runs past the field"
        )));
    }
    let corners = [
        field.angle(row, col),
        field.angle(row, col + 1),
        field.angle(row + 1, col + 1),
        field.angle(row + 1, col),
    ];
    let total: f64 = (0..4)
        .map(|k| wrap_orientation_delta(corners[(k + 1) % 4] - corners[k]))
        .sum();
    Ok(total / (2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorePoint {
    pub x: usize,
    pub y: usize,
    pub poincare_value: f64,
    /// Set when no block qualified and the image centre was returned.
    pub fallback: bool,
}

impl CorePoint {
    pub fn coord(&self) -> PixelCoord {
        PixelCoord {
            x: self.x,
            y: self.y,
        }
    }
}

/// Mean coherence over the 8-neighbour ring of an interior block.
fn ring_coherence(field: &OrientationField, row: usize, col: usize) -> f64 {
    RING.iter()
        .map(|&(dc, dr)| {
            field.coherence((row as isize + dr) as usize, (col as isize + dc) as usize)
        })
        .sum::<f64>()
        / RING.len() as f64
}

/// Picks the most coherent core-type block. Ties keep the first block in
/// row-major order. With no candidate the image centre is returned and
/// flagged as a fallback.
pub fn detect_core(field: &OrientationField) -> CorePoint {
    let mut best: Option<(f64, f64, usize, usize)> = None;
    for row in 1..field.blocks_y.saturating_sub(1) {
        for col in 1..field.blocks_x.saturating_sub(1) {
            let Ok(pi) = poincare_index(field, row, col) else {
                continue;
            };
            if (pi - 0.5).abs() > CORE_INDEX_TOLERANCE {
                continue;
            }
            let score = ring_coherence(field, row, col);
            if best.is_none_or(|(s, ..)| score > s) {
                best = Some((score, pi, row, col));
            }
        }
    }
    match best {
        Some((_, pi, row, col)) => {
            let c = field.block_center(row, col);
            CorePoint {
                x: c.x.min(field.image_width - 1),
                y: c.y.min(field.image_height - 1),
                poincare_value: pi,
                fallback: false,
            }
        }
        None => CorePoint {
            x: field.image_width / 2,
            y: field.image_height / 2,
            poincare_value: 0.0,
            fallback: true,
        },
    }
}

/// RGB rendering of `img` with block orientations drawn as short segments
/// and the core marked by a filled green disc.
pub fn render_core_overlay(img: &GrayImage, field: &OrientationField, core: &CorePoint) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    let mut rgb: Vec<u8> = img.to_u8().iter().flat_map(|&g| [g, g, g]).collect();
    let mut put = |x: isize, y: isize, color: [u8; 3]| {
        if x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h {
            let i = 3 * (y as usize * w + x as usize);
            rgb[i..i + 3].copy_from_slice(&color);
        }
    };
    let half = field.block_size as f64 * 0.4;
    for row in 0..field.blocks_y {
        for col in 0..field.blocks_x {
            let c = field.block_center(row, col);
            let theta = field.angle(row, col);
            let shade = (80.0 + 175.0 * field.coherence(row, col)) as u8;
            let steps = (2.0 * half).ceil() as isize;
            for s in -steps..=steps {
                let t = s as f64 / steps as f64 * half;
                put(
                    (c.x as f64 + t * theta.cos()).round() as isize,
                    (c.y as f64 + t * theta.sin()).round() as isize,
                    [shade, 40, 40],
                );
            }
        }
    }
    let radius = (field.block_size as isize / 2).max(3);
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            if dx * dx + dy * dy <= radius * radius {
                put(core.x as isize + dx, core.y as isize + dy, [0, 220, 0]);
            }
        }
    }
    rgb
}
