//! REPTree: information-gain tree grown on part of the data and pruned
//! against the held-out remainder.

use super::split::SplitCriterion;
use super::tree::{grow, AttributeSampling, GrowOptions, Node};
use super::{LearnerSpec, Samples, TreeModel};
use crate::dataset::stratify;
use crate::error::{Error, Result};

/// Both trees of a REPTree run, for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct RepOutcome {
    pub unpruned: Node,
    pub pruned: Node,
    pub grow_indices: Vec<usize>,
    pub prune_indices: Vec<usize>,
    pub pruning_skipped: bool,
}

/// Errors of `node` on `indices` after pruning it in place.
fn prune(node: &mut Node, samples: &Samples, indices: &[usize]) -> usize {
    let leaf_errors = indices
        .iter()
        .filter(|&&i| samples.label(i) != node.predicted_class())
        .count();
    let Node::Split {
        attribute,
        threshold,
        left,
        right,
        counts,
        ..
    } = node
    else {
        return leaf_errors;
    };
    let (l, r): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| samples.value(i, *attribute) <= *threshold);
    let subtree_errors = prune(left, samples, &l) + prune(right, samples, &r);
    if leaf_errors <= subtree_errors {
        *node = Node::leaf(std::mem::take(counts));
        leaf_errors
    } else {
        subtree_errors
    }
}

pub fn grow_and_prune(
    samples: &Samples,
    pruning_fraction: f64,
    min_leaf: usize,
    seed: u64,
) -> Result<RepOutcome> {
    if !(pruning_fraction > 0.0 && pruning_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "pruning fraction must lie in (0, 1), got {pruning_fraction}"
        )));
    }
    let n = samples.len();
    let n_folds = (1.0 / pruning_fraction).round().max(2.0) as usize;
    let (grow_indices, prune_indices) = match stratify(samples.labels(), n_folds, seed) {
        Ok(folds) => (0..n).partition(|&i| folds[i] != n_folds - 1),
        Err(_) => ((0..n).collect(), Vec::new()),
    };
    let opts = GrowOptions {
        criterion: SplitCriterion::InfoGain,
        min_leaf,
        max_depth: None,
        split_zero_gain: false,
    };
    let unpruned = grow::<rand_chacha::ChaCha8Rng>(samples, &grow_indices, &opts, &mut AttributeSampling::All);
    let pruning_skipped = prune_indices.is_empty();
    let mut pruned = unpruned.clone();
    if !pruning_skipped {
        prune(&mut pruned, samples, &prune_indices);
    }
    Ok(RepOutcome {
        unpruned,
        pruned,
        grow_indices,
        prune_indices,
        pruning_skipped,
    })
}

pub fn train_rep_tree(
    samples: &Samples,
    pruning_fraction: f64,
    min_leaf: usize,
    seed: u64,
) -> Result<TreeModel> {
    let outcome = grow_and_prune(samples, pruning_fraction, min_leaf, seed)?;
    if outcome.pruning_skipped {
        log::warn!("REPTree: too few instances for a pruning set, pruning skipped");
    }
    let mut model = TreeModel::single(
        LearnerSpec::RepTree {
            pruning_fraction,
            min_leaf,
        },
        seed,
        samples,
        outcome.pruned,
    );
    model.pruning_skipped = outcome.pruning_skipped;
    Ok(model)
}

/// Misclassified instances among `indices`.
pub fn errors_on(root: &Node, samples: &Samples, indices: &[usize]) -> usize {
    indices
        .iter()
        .filter(|&&i| root.predict_class(samples.row(i)) != samples.label(i))
        .count()
}
