//! Threshold search for binary numeric splits.

use serde::{Deserialize, Serialize};

use super::Samples;

/// Gains closer than this are treated as equal when ranking candidates.
pub const GAIN_TIE_TOLERANCE: f64 = 1e-12;

/// Shannon entropy in bits of a class histogram.
pub fn entropy_of(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>()
}

/// `x ≤ threshold` goes left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitCandidate {
    pub attribute: usize,
    pub threshold: f64,
    /// Information gain in bits.
    pub gain: f64,
    /// Gain divided by split information, when that is positive.
    pub gain_ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCriterion {
    InfoGain,
    /// C4.5: best gain ratio among attributes whose gain reaches the mean.
    GainRatio,
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = (lo + hi) / 2.0;
    // adjacent floats can round the midpoint up onto `hi`
    if mid < hi {
        mid
    } else {
        lo
    }
}

/// Every admissible threshold of one attribute in increasing order, each
/// leaving at least `min_leaf` instances on either side.
pub(crate) fn attribute_candidates(
    samples: &Samples,
    indices: &[usize],
    attribute: usize,
    min_leaf: usize,
) -> Vec<SplitCandidate> {
    let n = indices.len();
    if n < 2 {
        return Vec::new();
    }
    let k = samples.n_classes();
    let mut order: Vec<(f64, usize)> = indices
        .iter()
        .map(|&i| (samples.value(i, attribute), samples.label(i)))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut total = vec![0usize; k];
    for &(_, c) in &order {
        total[c] += 1;
    }
    let parent = entropy_of(&total);
    let mut left = vec![0usize; k];
    let mut right = total;
    let mut out = Vec::new();
    let min_leaf = min_leaf.max(1);
    for i in 0..n - 1 {
        let c = order[i].1;
        left[c] += 1;
        right[c] -= 1;
        let (v, next) = (order[i].0, order[i + 1].0);
        if v >= next {
            continue;
        }
        let n_left = i + 1;
        let n_right = n - n_left;
        if n_left < min_leaf || n_right < min_leaf {
            continue;
        }
        let (wl, wr) = (n_left as f64 / n as f64, n_right as f64 / n as f64);
        let gain = (parent - wl * entropy_of(&left) - wr * entropy_of(&right)).max(0.0);
        let split_info = -(wl * wl.log2() + wr * wr.log2());
        out.push(SplitCandidate {
            attribute,
            threshold: midpoint(v, next),
            gain,
            gain_ratio: (split_info > 0.0).then(|| gain / split_info),
        });
    }
    out
}

/// First candidate, in the given order, whose gain is within tolerance of
/// the maximum.
fn first_max_gain(cands: &[SplitCandidate]) -> Option<SplitCandidate> {
    let max = cands.iter().map(|c| c.gain).fold(f64::NEG_INFINITY, f64::max);
    cands
        .iter()
        .find(|c| c.gain >= max - GAIN_TIE_TOLERANCE)
        .copied()
}

/// Ranks per-attribute candidate lists (each in increasing threshold order).
/// Ties go to the lower attribute index, then the lower threshold. Returns
/// `None` unless some split has strictly positive gain.
pub(crate) fn select_split(
    mut per_attribute: Vec<(usize, Vec<SplitCandidate>)>,
    criterion: SplitCriterion,
) -> Option<SplitCandidate> {
    per_attribute.sort_by_key(|(a, _)| *a);
    match criterion {
        SplitCriterion::InfoGain => {
            let all: Vec<SplitCandidate> = per_attribute.into_iter().flat_map(|(_, c)| c).collect();
            first_max_gain(&all).filter(|c| c.gain > GAIN_TIE_TOLERANCE)
        }
        SplitCriterion::GainRatio => {
            let best: Vec<SplitCandidate> = per_attribute
                .iter()
                .filter_map(|(_, c)| first_max_gain(c))
                .filter(|c| c.gain > GAIN_TIE_TOLERANCE && c.gain_ratio.is_some())
                .collect();
            if best.is_empty() {
                return None;
            }
            let mean = best.iter().map(|c| c.gain).sum::<f64>() / best.len() as f64;
            let eligible: Vec<&SplitCandidate> = best
                .iter()
                .filter(|c| c.gain >= mean - GAIN_TIE_TOLERANCE)
                .collect();
            let top = eligible
                .iter()
                .filter_map(|c| c.gain_ratio)
                .fold(f64::NEG_INFINITY, f64::max);
            eligible
                .into_iter()
                .find(|c| c.gain_ratio.unwrap_or(f64::NEG_INFINITY) >= top - GAIN_TIE_TOLERANCE)
                .copied()
        }
    }
}

/// Best binary split of `indices` over the candidate attributes, with
/// thresholds at midpoints between consecutive distinct values.
pub fn best_split(
    samples: &Samples,
    indices: &[usize],
    attributes: &[usize],
    criterion: SplitCriterion,
    min_leaf: usize,
) -> Option<SplitCandidate> {
    let per_attribute = attributes
        .iter()
        .map(|&a| (a, attribute_candidates(samples, indices, a, min_leaf)))
        .collect();
    select_split(per_attribute, criterion)
}
