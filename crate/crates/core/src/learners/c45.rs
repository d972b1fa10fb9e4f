//! C4.5 (J48): gain-ratio tree with pessimistic error pruning.

use statrs::distribution::{ContinuousCDF, Normal};

use super::split::SplitCriterion;
use super::tree::{grow, AttributeSampling, GrowOptions, Node};
use super::{LearnerSpec, Samples, TreeModel};
use crate::error::{Error, Result};

/// Normal-approximation upper confidence bound on the errors of a node that
/// misclassifies `errors` of its `n` training instances, scaled back to a
/// count.
pub fn pessimistic_errors(n: usize, errors: usize, z: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let f = errors as f64 / n;
    let z2 = z * z;
    let upper = (f + z2 / (2.0 * n) + z * (f / n - f * f / n + z2 / (4.0 * n * n)).max(0.0).sqrt())
        / (1.0 + z2 / n);
    upper * n
}

/// `Φ⁻¹(1 − confidence)`, floored at zero.
fn z_for(confidence: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(1.0 - confidence).max(0.0)
}

fn leaf_errors(counts: &[usize]) -> usize {
    counts.iter().sum::<usize>() - counts.iter().max().copied().unwrap_or(0)
}

/// Prunes bottom-up in place and returns the subtree's estimated errors.
fn prune(node: &mut Node, z: f64) -> f64 {
    let counts = node.counts();
    let as_leaf = pessimistic_errors(counts.iter().sum(), leaf_errors(counts), z);
    let Node::Split {
        left, right, counts, ..
    } = node
    else {
        return as_leaf;
    };
    let subtree = prune(left, z) + prune(right, z);
    if as_leaf <= subtree + 1e-12 {
        *node = Node::leaf(std::mem::take(counts));
        as_leaf
    } else {
        subtree
    }
}

/// Unpruned gain-ratio tree.
pub fn grow_c45(samples: &Samples, min_leaf: usize) -> Node {
    let opts = GrowOptions {
        criterion: SplitCriterion::GainRatio,
        min_leaf,
        max_depth: None,
        split_zero_gain: false,
    };
    let all: Vec<usize> = (0..samples.len()).collect();
    grow::<rand_chacha::ChaCha8Rng>(samples, &all, &opts, &mut AttributeSampling::All)
}

/// `confidence >= 1` disables pruning.
pub fn train_c45(samples: &Samples, confidence: f64, min_leaf: usize) -> Result<TreeModel> {
    if !confidence.is_finite() || confidence <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "confidence must be positive, got {confidence}"
        )));
    }
    if min_leaf == 0 {
        return Err(Error::InvalidArgument("min_leaf must be at least 1".into()));
    }
    let mut root = grow_c45(samples, min_leaf);
    if confidence < 1.0 {
        prune(&mut root, z_for(confidence));
    }
    Ok(TreeModel::single(
        LearnerSpec::C45 {
            confidence,
            min_leaf,
        },
        0,
        samples,
        root,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separable() -> Samples {
        Samples::new(
            vec!["x".into(), "y".into()],
            vec!["a".into(), "b".into(), "c".into()],
            (0..30).map(|i| vec![i as f64, (i % 4) as f64]).collect(),
            (0..30).map(|i| i / 10).collect(),
        )
        .unwrap()
    }

    #[test]
    fn z_at_default_confidence() {
        assert!((z_for(0.25) - 0.674_489_750_196_08).abs() < 1e-9);
        assert_eq!(z_for(0.5), 0.0);
        assert_eq!(z_for(0.9), 0.0);
    }

    #[test]
    fn bound_exceeds_empirical_error() {
        let z = z_for(0.25);
        for (n, e) in [(1, 0), (6, 0), (10, 3), (100, 50)] {
            let b = pessimistic_errors(n, e, z);
            assert!(b > e as f64 && b <= n as f64, "{n} {e} {b}");
        }
        assert!((pessimistic_errors(10, 3, 0.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn separable_data_is_fitted() {
        let s = separable();
        let m = train_c45(&s, 0.25, 2).unwrap();
        for i in 0..s.len() {
            assert_eq!(m.predict_index(s.row(i)).unwrap(), s.label(i));
        }
    }

    #[test]
    fn min_leaf_of_n_gives_majority_leaf() {
        let s = separable();
        let m = train_c45(&s, 0.25, s.len()).unwrap();
        assert_eq!(m.root().leaf_count(), 1);
        assert_eq!(m.root().predicted_class(), 0);
    }

    #[test]
    fn full_confidence_keeps_grown_tree() {
        let s = Samples::new(
            vec!["x".into()],
            vec!["a".into(), "b".into()],
            (0..40).map(|i| vec![i as f64]).collect(),
            (0..40).map(|i| usize::from((i * 7) % 3 == 0)).collect(),
        )
        .unwrap();
        let unpruned = grow_c45(&s, 2);
        assert_eq!(train_c45(&s, 1.0, 2).unwrap().trees[0], unpruned);
        let pruned = train_c45(&s, 0.25, 2).unwrap();
        assert!(pruned.root().leaf_count() <= unpruned.leaf_count());
    }
}
