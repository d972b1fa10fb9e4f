//! Decision-tree learners: decision stump, random tree, REPTree, C4.5 (J48)
//! and random forest, all on numeric attributes with binary threshold splits.

mod c45;
mod forest;
mod rep_tree;
pub mod split;
pub mod tree;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub use c45::{grow_c45, pessimistic_errors, train_c45};
pub use forest::{train_random_forest, train_random_tree, tree_seed};
pub use rep_tree::{errors_on, grow_and_prune, train_rep_tree, RepOutcome};
pub use split::{best_split, entropy_of, SplitCandidate, SplitCriterion};
pub use tree::{grow_greedy, majority, Node};

/// Dense numeric training table with class indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    attributes: Vec<String>,
    classes: Vec<String>,
    values: Vec<f64>,
    labels: Vec<usize>,
}

impl Samples {
    pub fn new(
        attributes: Vec<String>,
        classes: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        if attributes.is_empty() || classes.is_empty() {
            return Err(Error::InvalidArgument(
                "samples need at least one attribute and one class".into(),
            ));
        }
        if rows.len() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows vs {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let mut values = Vec::with_capacity(rows.len() * attributes.len());
        for row in &rows {
            if row.len() != attributes.len() {
                return Err(Error::Arity {
                    expected: attributes.len(),
                    actual: row.len(),
                });
            }
            if let Some(i) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite(i));
            }
            values.extend_from_slice(row);
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= classes.len()) {
            return Err(Error::InvalidArgument(format!("label index {l} out of range")));
        }
        Ok(Samples {
            attributes,
            classes,
            values,
            labels,
        })
    }

    pub fn from_dataset(ds: &Dataset) -> Result<Self> {
        Self::new(
            ds.attributes().to_vec(),
            ds.classes().to_vec(),
            ds.instances().iter().map(|fv| fv.values.clone()).collect(),
            ds.label_indices(),
        )
    }

    /// Rows at `indices` (repeats allowed), keeping the full class list.
    pub fn subset(&self, indices: &[usize]) -> Samples {
        let m = self.attributes.len();
        let mut values = Vec::with_capacity(indices.len() * m);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Samples {
            attributes: self.attributes.clone(),
            classes: self.classes.clone(),
            values,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    #[inline]
    pub fn value(&self, i: usize, attribute: usize) -> f64 {
        self.values[i * self.attributes.len() + attribute]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.attributes.len();
        &self.values[i * m..(i + 1) * m]
    }

    /// Copy with one attribute column passed through `f`.
    pub fn map_attribute(&self, attribute: usize, f: impl Fn(f64) -> f64) -> Samples {
        let mut out = self.clone();
        let m = self.attributes.len();
        for i in 0..self.len() {
            out.values[i * m + attribute] = f(out.values[i * m + attribute]);
        }
        out
    }
}

/// Default attribute sample size for random trees: `floor(log2(M)) + 1`.
pub fn default_k_features(n_attributes: usize) -> usize {
    (n_attributes.max(1) as f64).log2().floor() as usize + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Stump,
    RandomTree,
    RepTree,
    C45,
    RandomForest,
}

/// A learner and its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum LearnerSpec {
    Stump,
    RandomTree {
        /// `None` selects `floor(log2(M)) + 1`.
        k_features: Option<usize>,
    },
    RepTree {
        pruning_fraction: f64,
        min_leaf: usize,
    },
    C45 {
        confidence: f64,
        min_leaf: usize,
    },
    RandomForest {
        n_trees: usize,
        k_features: Option<usize>,
        bootstrap: bool,
    },
}

impl LearnerSpec {
    pub const DEFAULTS: [LearnerSpec; 5] = [
        LearnerSpec::C45 {
            confidence: 0.25,
            min_leaf: 2,
        },
        LearnerSpec::RandomForest {
            n_trees: 100,
            k_features: None,
            bootstrap: true,
        },
        LearnerSpec::RandomTree { k_features: None },
        LearnerSpec::RepTree {
            pruning_fraction: 1.0 / 3.0,
            min_leaf: 2,
        },
        LearnerSpec::Stump,
    ];

    pub fn algorithm(&self) -> Algorithm {
        match self {
            LearnerSpec::Stump => Algorithm::Stump,
            LearnerSpec::RandomTree { .. } => Algorithm::RandomTree,
            LearnerSpec::RepTree { .. } => Algorithm::RepTree,
            LearnerSpec::C45 { .. } => Algorithm::C45,
            LearnerSpec::RandomForest { .. } => Algorithm::RandomForest,
        }
    }

    /// Machine name, as accepted by `from_str`.
    pub fn key(&self) -> &'static str {
        match self.algorithm() {
            Algorithm::Stump => "decision_stump",
            Algorithm::RandomTree => "random_tree",
            Algorithm::RepTree => "rep_tree",
            Algorithm::C45 => "j48",
            Algorithm::RandomForest => "random_forest",
        }
    }

    /// Human-readable classifier name used in reports.
    pub fn display_name(&self) -> &'static str {
        match self.algorithm() {
            Algorithm::Stump => "Decision Stump",
            Algorithm::RandomTree => "Random Tree",
            Algorithm::RepTree => "REP Tree",
            Algorithm::C45 => "J48",
            Algorithm::RandomForest => "Random Forest",
        }
    }

    pub fn train(&self, samples: &Samples, seed: u64) -> Result<TreeModel> {
        match *self {
            LearnerSpec::Stump => train_stump(samples),
            LearnerSpec::RandomTree { k_features } => train_random_tree(samples, k_features, seed),
            LearnerSpec::RepTree {
                pruning_fraction,
                min_leaf,
            } => train_rep_tree(samples, pruning_fraction, min_leaf, seed),
            LearnerSpec::C45 {
                confidence,
                min_leaf,
            } => train_c45(samples, confidence, min_leaf),
            LearnerSpec::RandomForest {
                n_trees,
                k_features,
                bootstrap,
            } => train_random_forest(samples, n_trees, k_features, bootstrap, seed),
        }
    }
}

impl FromStr for LearnerSpec {
    type Err = Error;

    /// Default-configured learner from a name such as `j48` or `random_forest`.
    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().to_ascii_lowercase().replace(['-', ' ', '.'], "_");
        let idx = match normalized.as_str() {
            "j48" | "c45" | "c4_5" => 0,
            "random_forest" | "randomforest" | "rf" => 1,
            "random_tree" | "randomtree" => 2,
            "rep_tree" | "reptree" => 3,
            "decision_stump" | "stump" | "decisionstump" => 4,
            _ => return Err(Error::UnknownLearner(s.to_string())),
        };
        Ok(LearnerSpec::DEFAULTS[idx].clone())
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

/// A trained classifier: one tree, or several voting trees for a forest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub spec: LearnerSpec,
    pub seed: u64,
    pub attributes: Vec<String>,
    pub classes: Vec<String>,
    pub trees: Vec<Node>,
    /// Set when REPTree had no instances left to prune with.
    #[serde(default)]
    pub pruning_skipped: bool,
}

impl TreeModel {
    pub fn algorithm(&self) -> Algorithm {
        self.spec.algorithm()
    }

    pub(crate) fn single(spec: LearnerSpec, seed: u64, samples: &Samples, root: Node) -> Self {
        TreeModel {
            spec,
            seed,
            attributes: samples.attributes.clone(),
            classes: samples.classes.clone(),
            trees: vec![root],
            pruning_skipped: false,
        }
    }

    pub fn root(&self) -> &Node {
        &self.trees[0]
    }

    fn check_input(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.attributes.len() {
            return Err(Error::Arity {
                expected: self.attributes.len(),
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(())
    }

    /// Class index only, for bulk evaluation.
    pub fn predict_index(&self, values: &[f64]) -> Result<usize> {
        Ok(self.predict(values)?.class_index)
    }

    pub fn predict(&self, values: &[f64]) -> Result<Prediction> {
        self.check_input(values)?;
        let k = self.classes.len();
        let scores: Vec<f64> = if self.trees.len() == 1 {
            let counts = self.trees[0].route(values).counts();
            let total: usize = counts.iter().sum();
            if total == 0 {
                vec![1.0 / k as f64; k]
            } else {
                counts.iter().map(|&c| c as f64 / total as f64).collect()
            }
        } else {
            let mut votes = vec![0usize; k];
            for t in &self.trees {
                votes[t.predict_class(values)] += 1;
            }
            votes
                .iter()
                .map(|&v| v as f64 / self.trees.len() as f64)
                .collect()
        };
        let class_index = if self.trees.len() == 1 {
            self.trees[0].predict_class(values)
        } else {
            // vote fractions share one denominator, so comparing them is exact
            let mut best = 0;
            for (i, &s) in scores.iter().enumerate() {
                if s > scores[best] {
                    best = i;
                }
            }
            best
        };
        Ok(Prediction {
            class_index,
            label: self.classes[class_index].clone(),
            scores,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class_index: usize,
    pub label: String,
    /// Per-class leaf frequency for a single tree, vote fraction for a forest.
    pub scores: Vec<f64>,
}

/// Decision stump: the single best information-gain split.
pub fn train_stump(samples: &Samples) -> Result<TreeModel> {
    let all: Vec<usize> = (0..samples.len()).collect();
    let counts = tree::class_counts(samples, &all);
    let attrs: Vec<usize> = (0..samples.n_attributes()).collect();
    let root = match best_split(samples, &all, &attrs, SplitCriterion::InfoGain, 1) {
        Some(split) => {
            let (l, r): (Vec<usize>, Vec<usize>) = all
                .iter()
                .partition(|&&i| samples.value(i, split.attribute) <= split.threshold);
            Node::Split {
                attribute: split.attribute,
                threshold: split.threshold,
                gain: split.gain,
                counts,
                left: Box::new(Node::leaf(tree::class_counts(samples, &l))),
                right: Box::new(Node::leaf(tree::class_counts(samples, &r))),
            }
        }
        None => Node::leaf(counts),
    };
    Ok(TreeModel::single(LearnerSpec::Stump, 0, samples, root))
}

pub const MODEL_FORMAT: &str = "fpid-tree-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize)]
struct EnvelopeOut<'a> {
    format: &'static str,
    version: u32,
    model: &'a TreeModel,
}

pub fn model_to_json(model: &TreeModel) -> String {
    serde_json::to_string_pretty(&EnvelopeOut {
        format: MODEL_FORMAT,
        version: MODEL_VERSION,
        model,
    })
    .expect("model serializes")
}

pub fn model_from_json(text: &str) -> Result<TreeModel> {
    let corrupt = |msg: String| Error::CorruptModel(msg);
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| corrupt(e.to_string()))?;
    if value.get("format").and_then(|f| f.as_str()) != Some(MODEL_FORMAT) {
        return Err(corrupt("missing or foreign format tag".into()));
    }
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| corrupt("missing version".into()))?;
    if version != MODEL_VERSION as u64 {
        return Err(Error::ModelVersion {
            found: version as u32,
            expected: MODEL_VERSION,
        });
    }
    let model: TreeModel = serde_json::from_value(value["model"].clone())
        .map_err(|e| corrupt(e.to_string()))?;
    let (m, k) = (model.attributes.len(), model.classes.len());
    if model.trees.is_empty() || k == 0 || !model.trees.iter().all(|t| t.is_consistent(m, k)) {
        return Err(corrupt("trees do not match the declared schema".into()));
    }
    Ok(model)
}

pub fn save_model(model: &TreeModel, path: &Path) -> Result<()> {
    fs::write(path, model_to_json(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<TreeModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}
