//! Gray-level co-occurrence matrices and their statistical descriptors.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::QuantizedImage;

/// Co-occurrence direction. Displacements use image coordinates with `y`
/// growing downwards, so 45° points up and to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Angle {
    #[serde(rename = "0")]
    Deg0,
    #[serde(rename = "45")]
    Deg45,
    #[serde(rename = "90")]
    Deg90,
    #[serde(rename = "135")]
    Deg135,
}

impl Angle {
    pub const ALL: [Angle; 4] = [Angle::Deg0, Angle::Deg45, Angle::Deg90, Angle::Deg135];

    pub fn degrees(self) -> u32 {
        match self {
            Angle::Deg0 => 0,
            Angle::Deg45 => 45,
            Angle::Deg90 => 90,
            Angle::Deg135 => 135,
        }
    }

    pub fn from_degrees(deg: u32) -> Result<Angle> {
        match deg {
            0 => Ok(Angle::Deg0),
            45 => Ok(Angle::Deg45),
            90 => Ok(Angle::Deg90),
            135 => Ok(Angle::Deg135),
            other => Err(Error::InvalidArgument(format!(
                "angle must be one of 0, 45, 90, 135; got {other}"
            ))),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degrees())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Offset {
    pub distance: usize,
    pub angle: Angle,
}

impl Offset {
    pub fn new(distance: usize, angle: Angle) -> Result<Offset> {
        if distance == 0 {
            return Err(Error::InvalidArgument("offset distance must be positive".into()));
        }
        Ok(Offset { distance, angle })
    }

    /// `(Δx, Δy)` of the partner pixel.
    pub fn displacement(&self) -> (isize, isize) {
        let d = self.distance as isize;
        match self.angle {
            Angle::Deg0 => (d, 0),
            Angle::Deg45 => (d, -d),
            Angle::Deg90 => (0, -d),
            Angle::Deg135 => (-d, -d),
        }
    }
}

/// Symmetric co-occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glcm {
    levels: usize,
    counts: Vec<u64>,
    offset: Offset,
    total_pairs: u64,
}

impl Glcm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn offset(&self) -> Offset {
        self.offset
    }

    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    pub fn count(&self, m: usize, n: usize) -> u64 {
        self.counts[m * self.levels + n]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for m in 0..self.levels {
            let row: Vec<String> = (0..self.levels).map(|n| self.count(m, n).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Counts every pixel pair `(p, p + offset)` with both ends inside the image,
/// once in each order.
pub fn glcm(img: &QuantizedImage, offset: Offset) -> Result<Glcm> {
    let (dx, dy) = offset.displacement();
    let (w, h) = (img.width(), img.height());
    if dx.unsigned_abs() >= w || dy.unsigned_abs() >= h {
        return Err(Error::InvalidArgument(format!(
            "offset {dx},{dy} leaves no pixel pairs in a {w}x{h} image"
        )));
    }
    let k = img.levels();
    let mut counts = vec![0u64; k * k];
    let mut pairs = 0u64;
    let x_range = (dx.min(0).unsigned_abs())..(w as isize - dx.max(0)).max(0) as usize;
    let y_range = (dy.min(0).unsigned_abs())..(h as isize - dy.max(0)).max(0) as usize;
    for y in y_range {
        let ny = (y as isize + dy) as usize;
        for x in x_range.clone() {
            let nx = (x as isize + dx) as usize;
            let (m, n) = (img.get(x, y), img.get(nx, ny));
            counts[m * k + n] += 1;
            counts[n * k + m] += 1;
            pairs += 1;
        }
    }
    Ok(Glcm {
        levels: k,
        counts,
        offset,
        total_pairs: 2 * pairs,
    })
}

/// Co-occurrence probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedGlcm {
    levels: usize,
    probabilities: Vec<f64>,
    mean: f64,
    degenerate: bool,
}

impl NormalizedGlcm {
    /// Normalizes an arbitrary non-negative `K×K` matrix (row-major).
    pub fn from_probabilities(levels: usize, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != levels * levels {
            return Err(Error::DimensionMismatch(format!(
                "{} cells for {levels} levels",
                probabilities.len()
            )));
        }
        let total: f64 = probabilities.iter().sum();
        if probabilities.iter().any(|p| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidArgument("probabilities must be finite and >= 0".into()));
        }
        if total <= 0.0 {
            return Ok(Self::empty(levels));
        }
        let probabilities: Vec<f64> = probabilities.iter().map(|p| p / total).collect();
        Ok(Self::with_mean(levels, probabilities))
    }

    fn empty(levels: usize) -> Self {
        NormalizedGlcm {
            levels,
            probabilities: vec![0.0; levels * levels],
            mean: 0.0,
            degenerate: true,
        }
    }

    fn with_mean(levels: usize, probabilities: Vec<f64>) -> Self {
        let mean = probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| (i / levels) as f64 * p)
            .sum();
        NormalizedGlcm {
            levels,
            probabilities,
            mean,
            degenerate: false,
        }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn p(&self, m: usize, n: usize) -> f64 {
        self.probabilities[m * self.levels + n]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `μ = Σ m·p(m, n)`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// True when the source matrix held no pairs.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let k = self.levels;
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| ((i / k) as f64, (i % k) as f64, p))
    }
}

pub fn normalize(g: &Glcm) -> NormalizedGlcm {
    if g.total_pairs == 0 {
        return NormalizedGlcm::empty(g.levels);
    }
    let total = g.total_pairs as f64;
    NormalizedGlcm::with_mean(g.levels, g.counts.iter().map(|&c| c as f64 / total).collect())
}

/// `Σ (m − μ)² p(m, n)`.
pub fn variance(p: &NormalizedGlcm) -> f64 {
    let mu = p.mean;
    p.cells().map(|(m, _, v)| (m - mu) * (m - mu) * v).sum()
}

pub fn max_probability(p: &NormalizedGlcm) -> f64 {
    p.probabilities.iter().copied().fold(0.0, f64::max)
}

/// Inverse difference: `Σ p(m, n) / (1 + |m − n|)`.
pub fn homogeneity(p: &NormalizedGlcm) -> f64 {
    p.cells().map(|(m, n, v)| v / (1.0 + (m - n).abs())).sum()
}

/// `−Σ p log10 p` with `0 log 0 = 0`.
pub fn entropy(p: &NormalizedGlcm) -> f64 {
    -p.probabilities
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.log10())
        .sum::<f64>()
}

/// Angular second moment.
pub fn energy(p: &NormalizedGlcm) -> f64 {
    p.probabilities.iter().map(|v| v * v).sum()
}

pub fn dissimilarity(p: &NormalizedGlcm) -> f64 {
    p.cells().map(|(m, n, v)| (m - n).abs() * v).sum()
}

pub fn contrast(p: &NormalizedGlcm) -> f64 {
    p.cells().map(|(m, n, v)| (m - n) * (m - n) * v).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Descriptor {
    Variance,
    MaxProbability,
    Homogeneity,
    Entropy,
    Energy,
    Dissimilarity,
    Contrast,
}

impl Descriptor {
    pub const ALL: [Descriptor; 7] = [
        Descriptor::Variance,
        Descriptor::MaxProbability,
        Descriptor::Homogeneity,
        Descriptor::Entropy,
        Descriptor::Energy,
        Descriptor::Dissimilarity,
        Descriptor::Contrast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Descriptor::Variance => "variance",
            Descriptor::MaxProbability => "max_probability",
            Descriptor::Homogeneity => "homogeneity",
            Descriptor::Entropy => "entropy",
            Descriptor::Energy => "energy",
            Descriptor::Dissimilarity => "dissimilarity",
            Descriptor::Contrast => "contrast",
        }
    }

    pub fn evaluate(self, p: &NormalizedGlcm) -> f64 {
        match self {
            Descriptor::Variance => variance(p),
            Descriptor::MaxProbability => max_probability(p),
            Descriptor::Homogeneity => homogeneity(p),
            Descriptor::Entropy => entropy(p),
            Descriptor::Energy => energy(p),
            Descriptor::Dissimilarity => dissimilarity(p),
            Descriptor::Contrast => contrast(p),
        }
    }
}

/// All seven descriptors of one matrix, in canonical order.
pub fn descriptors(p: &NormalizedGlcm) -> [f64; 7] {
    Descriptor::ALL.map(|d| d.evaluate(p))
}

pub const ATTRIBUTE_COUNT: usize = 28;

/// Canonical attribute names, descriptor-major and angle-minor, for example
/// `entropy_d_avg_a90`.
pub fn attribute_names() -> Vec<String> {
    Descriptor::ALL
        .iter()
        .flat_map(|d| Angle::ALL.iter().map(move |a| format!("{}_d_avg_a{}", d.name(), a)))
        .collect()
}

/// Index of `(descriptor, angle)` in the canonical ordering.
pub fn attribute_index(d: Descriptor, a: Angle) -> usize {
    let di = Descriptor::ALL.iter().position(|&x| x == d).unwrap();
    let ai = Angle::ALL.iter().position(|&x| x == a).unwrap();
    di * Angle::ALL.len() + ai
}

/// A labelled 28-attribute row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub label: String,
}

/// Averages each descriptor over `distances` for each of the four angles.
/// Offsets whose matrix is empty are left out of the average; an angle with
/// no usable distance is an error.
pub fn descriptor_vector(
    img: &QuantizedImage,
    distances: &[usize],
    label: &str,
) -> Result<FeatureVector> {
    if distances.is_empty() {
        return Err(Error::InvalidArgument("at least one distance is required".into()));
    }
    let mut values = vec![0.0; ATTRIBUTE_COUNT];
    for angle in Angle::ALL {
        let mut sums = [0.0; 7];
        let mut used = 0usize;
        for &d in distances {
            let offset = Offset::new(d, angle)?;
            let Ok(g) = glcm(img, offset) else { continue };
            let p = normalize(&g);
            if p.is_degenerate() {
                continue;
            }
            for (s, v) in sums.iter_mut().zip(descriptors(&p)) {
                *s += v;
            }
            used += 1;
        }
        if used == 0 {
            return Err(Error::DegenerateTexture);
        }
        for (i, d) in Descriptor::ALL.iter().enumerate() {
            values[attribute_index(*d, angle)] = sums[i] / used as f64;
        }
    }
    Ok(FeatureVector {
        values,
        label: label.to_string(),
    })
}
