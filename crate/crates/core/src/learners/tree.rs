//! Binary tree substrate shared by every learner.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::split::{attribute_candidates, select_split, SplitCandidate, SplitCriterion};
use super::Samples;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        /// Training instances per class that reached this leaf.
        counts: Vec<usize>,
    },
    Split {
        attribute: usize,
        threshold: f64,
        gain: f64,
        counts: Vec<usize>,
        left: Box<Node>,
        right: Box<Node>,
    },
}

/// Index of the largest count, the lowest index on ties.
pub fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

impl Node {
    pub fn counts(&self) -> &[usize] {
        match self {
            Node::Leaf { counts } | Node::Split { counts, .. } => counts,
        }
    }

    pub fn predicted_class(&self) -> usize {
        majority(self.counts())
    }

    pub fn leaf(counts: Vec<usize>) -> Node {
        Node::Leaf { counts }
    }

    /// Leaf reached by `values`.
    pub fn route(&self, values: &[f64]) -> &Node {
        let mut node = self;
        while let Node::Split {
            attribute,
            threshold,
            left,
            right,
            ..
        } = node
        {
            node = if values[*attribute] <= *threshold { left } else { right };
        }
        node
    }

    pub fn predict_class(&self, values: &[f64]) -> usize {
        self.route(values).predicted_class()
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Structural check against a schema.
    pub(crate) fn is_consistent(&self, n_attributes: usize, n_classes: usize) -> bool {
        match self {
            Node::Leaf { counts } => counts.len() == n_classes,
            Node::Split {
                attribute,
                threshold,
                counts,
                left,
                right,
                ..
            } => {
                *attribute < n_attributes
                    && threshold.is_finite()
                    && counts.len() == n_classes
                    && left.is_consistent(n_attributes, n_classes)
                    && right.is_consistent(n_attributes, n_classes)
            }
        }
    }
}

/// How candidate attributes are chosen at each node.
pub enum AttributeSampling<'a, R: Rng> {
    /// Every attribute is evaluated.
    All,
    /// Attributes are visited in a fresh random order; evaluation stops once
    /// at least `k` were seen and one of them gave positive gain.
    Random { k: usize, rng: &'a mut R },
}

pub struct GrowOptions {
    pub criterion: SplitCriterion,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    /// Split an impure node on a zero-gain threshold when no split has
    /// positive gain, so that consistent data is always fitted exactly.
    pub split_zero_gain: bool,
}

pub(crate) fn class_counts(samples: &Samples, indices: &[usize]) -> Vec<usize> {
    let mut counts = vec![0; samples.n_classes()];
    for &i in indices {
        counts[samples.label(i)] += 1;
    }
    counts
}

fn choose_split<R: Rng>(
    samples: &Samples,
    indices: &[usize],
    opts: &GrowOptions,
    sampling: &mut AttributeSampling<'_, R>,
) -> Option<SplitCandidate> {
    let n_attr = samples.n_attributes();
    let order: Vec<usize> = match sampling {
        AttributeSampling::All => (0..n_attr).collect(),
        AttributeSampling::Random { rng, .. } => {
            let mut v: Vec<usize> = (0..n_attr).collect();
            v.shuffle(*rng);
            v
        }
    };
    let k = match sampling {
        AttributeSampling::All => n_attr,
        AttributeSampling::Random { k, .. } => (*k).min(n_attr),
    };

    let mut evaluated = Vec::new();
    let mut found = false;
    for (seen, &a) in order.iter().enumerate() {
        let cands = attribute_candidates(samples, indices, a, opts.min_leaf);
        found |= cands.iter().any(|c| c.gain > super::split::GAIN_TIE_TOLERANCE);
        evaluated.push((a, cands));
        if seen + 1 >= k && found {
            break;
        }
    }
    if let Some(best) = select_split(evaluated.clone(), opts.criterion) {
        return Some(best);
    }
    if !opts.split_zero_gain {
        return None;
    }
    // zero-gain fallback: the median threshold of the first attribute, in
    // visiting order, that can separate anything
    evaluated
        .into_iter()
        .find(|(_, c)| !c.is_empty())
        .map(|(_, c)| c[c.len() / 2])
}

/// Greedy top-down induction over `indices`.
pub fn grow<R: Rng>(
    samples: &Samples,
    indices: &[usize],
    opts: &GrowOptions,
    sampling: &mut AttributeSampling<'_, R>,
) -> Node {
    grow_at(samples, indices, opts, sampling, 0)
}

fn grow_at<R: Rng>(
    samples: &Samples,
    indices: &[usize],
    opts: &GrowOptions,
    sampling: &mut AttributeSampling<'_, R>,
    depth: usize,
) -> Node {
    let counts = class_counts(samples, indices);
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    let too_small = indices.len() < 2 * opts.min_leaf.max(1);
    let too_deep = opts.max_depth.is_some_and(|d| depth >= d);
    if pure || too_small || too_deep {
        return Node::leaf(counts);
    }
    let Some(split) = choose_split(samples, indices, opts, sampling) else {
        return Node::leaf(counts);
    };
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| samples.value(i, split.attribute) <= split.threshold);
    debug_assert!(!left_idx.is_empty() && !right_idx.is_empty());
    let left = grow_at(samples, &left_idx, opts, sampling, depth + 1);
    let right = grow_at(samples, &right_idx, opts, sampling, depth + 1);
    Node::Split {
        attribute: split.attribute,
        threshold: split.threshold,
        gain: split.gain,
        counts,
        left: Box::new(left),
        right: Box::new(right),
    }
}

/// Fully grown information-gain tree over all attributes.
pub fn grow_greedy(samples: &Samples, min_leaf: usize) -> Node {
    let opts = GrowOptions {
        criterion: SplitCriterion::InfoGain,
        min_leaf,
        max_depth: None,
        split_zero_gain: false,
    };
    let all: Vec<usize> = (0..samples.len()).collect();
    grow::<rand_chacha::ChaCha8Rng>(samples, &all, &opts, &mut AttributeSampling::All)
}
