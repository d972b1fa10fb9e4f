//! Random trees and bagged forests of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::split::SplitCriterion;
use super::tree::{grow, AttributeSampling, GrowOptions, Node};
use super::{default_k_features, LearnerSpec, Samples, TreeModel};
use crate::error::{Error, Result};

fn resolve_k(samples: &Samples, k_features: Option<usize>) -> Result<usize> {
    let m = samples.n_attributes();
    let k = k_features.unwrap_or_else(|| default_k_features(m));
    if k == 0 || k > m {
        return Err(Error::InvalidArgument(format!(
            "k_features must lie in 1..={m}, got {k}"
        )));
    }
    Ok(k)
}

fn random_tree_root(samples: &Samples, indices: &[usize], k: usize, rng: &mut ChaCha8Rng) -> Node {
    let opts = GrowOptions {
        criterion: SplitCriterion::InfoGain,
        min_leaf: 1,
        max_depth: None,
        split_zero_gain: true,
    };
    grow(samples, indices, &opts, &mut AttributeSampling::Random { k, rng })
}

/// Unpruned tree with `k` attributes drawn at every node.
pub fn train_random_tree(samples: &Samples, k_features: Option<usize>, seed: u64) -> Result<TreeModel> {
    let k = resolve_k(samples, k_features)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<usize> = (0..samples.len()).collect();
    let root = random_tree_root(samples, &all, k, &mut rng);
    Ok(TreeModel::single(
        LearnerSpec::RandomTree { k_features },
        seed,
        samples,
        root,
    ))
}

/// Seed of tree `index` within a forest trained from `master`
/// (splitmix64 finalizer over the pair).
pub fn tree_seed(master: u64, index: usize) -> u64 {
    let mut z = master ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn forest_member(samples: &Samples, k: usize, bootstrap: bool, seed: u64) -> Node {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = samples.len();
    if bootstrap {
        let draws: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let bag = samples.subset(&draws);
        let all: Vec<usize> = (0..n).collect();
        random_tree_root(&bag, &all, k, &mut rng)
    } else {
        let all: Vec<usize> = (0..n).collect();
        random_tree_root(samples, &all, k, &mut rng)
    }
}

/// Bagged random trees voting by simple majority. Each tree draws from its
/// own seed, so parallel and sequential training agree.
pub fn train_random_forest(
    samples: &Samples,
    n_trees: usize,
    k_features: Option<usize>,
    bootstrap: bool,
    seed: u64,
) -> Result<TreeModel> {
    if n_trees < 1 {
        return Err(Error::InvalidArgument("a forest needs at least one tree".into()));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("cannot train on zero instances".into()));
    }
    let k = resolve_k(samples, k_features)?;

    #[cfg(feature = "parallel")]
    let trees: Vec<Node> = {
        use rayon::prelude::*;
        (0..n_trees)
            .into_par_iter()
            .map(|i| forest_member(samples, k, bootstrap, tree_seed(seed, i)))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let trees: Vec<Node> = (0..n_trees)
        .map(|i| forest_member(samples, k, bootstrap, tree_seed(seed, i)))
        .collect();

    Ok(TreeModel {
        spec: LearnerSpec::RandomForest {
            n_trees,
            k_features,
            bootstrap,
        },
        seed,
        attributes: samples.attributes().to_vec(),
        classes: samples.classes().to_vec(),
        trees,
        pruning_skipped: false,
    })
}
