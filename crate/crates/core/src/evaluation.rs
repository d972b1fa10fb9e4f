//! Confusion matrices, precision/recall/F-measure and stratified k-fold
//! cross-validation with pooled out-of-fold predictions.

use serde::{Deserialize, Serialize};

use crate::dataset::{stratify, Dataset};
use crate::error::{Error, Result};
use crate::learners::{LearnerSpec, Samples};

/// `counts[actual][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn zeros(classes: Vec<String>) -> Self {
        let k = classes.len();
        ConfusionMatrix {
            classes,
            counts: vec![vec![0; k]; k],
        }
    }

    /// From class indices into `classes`.
    pub fn from_indices(classes: Vec<String>, truths: &[usize], predictions: &[usize]) -> Result<Self> {
        if truths.len() != predictions.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} truths vs {} predictions",
                truths.len(),
                predictions.len()
            )));
        }
        let mut cm = Self::zeros(classes);
        let k = cm.classes.len();
        for (&a, &p) in truths.iter().zip(predictions) {
            if a >= k || p >= k {
                return Err(Error::UnknownClass(format!("class index {}", a.max(p))));
            }
            cm.counts[a][p] += 1;
        }
        Ok(cm)
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sum(&self, c: usize) -> u64 {
        self.counts[c].iter().sum()
    }

    pub fn column_sum(&self, c: usize) -> u64 {
        self.counts.iter().map(|row| row[c]).sum()
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        for (r, o) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in r.iter_mut().zip(o) {
                *a += b;
            }
        }
    }
}

/// Matrix from label strings, checked against `classes`.
pub fn confusion(predictions: &[String], truths: &[String], classes: &[String]) -> Result<ConfusionMatrix> {
    let index = |s: &String| {
        classes
            .iter()
            .position(|c| c == s)
            .ok_or_else(|| Error::UnknownClass(s.clone()))
    };
    let p = predictions.iter().map(index).collect::<Result<Vec<_>>>()?;
    let t = truths.iter().map(index).collect::<Result<Vec<_>>>()?;
    ConfusionMatrix::from_indices(classes.to_vec(), &t, &p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// Actual instances of the class.
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub per_class: Vec<ClassMetrics>,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub accuracy: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Per-class and support-weighted metrics. Zero denominators yield 0.
pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    let total = cm.total();
    let per_class: Vec<ClassMetrics> = (0..cm.n_classes())
        .map(|c| {
            let tp = cm.counts[c][c];
            let precision = ratio(tp, cm.column_sum(c));
            let recall = ratio(tp, cm.row_sum(c));
            ClassMetrics {
                class: cm.classes[c].clone(),
                precision,
                recall,
                f_measure: harmonic(precision, recall),
                support: cm.row_sum(c),
            }
        })
        .collect();
    let weighted = |f: fn(&ClassMetrics) -> f64| {
        if total == 0 {
            0.0
        } else {
            per_class.iter().map(|m| f(m) * m.support as f64).sum::<f64>() / total as f64
        }
    };
    Metrics {
        precision: weighted(|m| m.precision),
        recall: weighted(|m| m.recall),
        f_measure: weighted(|m| m.f_measure),
        accuracy: ratio(cm.trace(), total),
        per_class,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub f_measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub learner: LearnerSpec,
    pub folds: usize,
    pub seed: u64,
    /// Always "pooled": metrics come from the summed out-of-fold matrix.
    pub aggregation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub classifier: String,
    pub config: EvalConfig,
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
    pub folds: Vec<FoldResult>,
    /// Unweighted mean of the per-fold weighted F-measures, for comparison
    /// with fold-averaged summaries.
    pub fold_mean_f_measure: f64,
    pub fold_mean_accuracy: f64,
}

pub const CSV_HEADER: &str = "classifier,learner,folds,seed,precision,recall,f_measure,accuracy";

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6}",
            self.classifier,
            self.config.learner.key(),
            self.config.folds,
            self.config.seed,
            self.metrics.precision,
            self.metrics.recall,
            self.metrics.f_measure,
            self.metrics.accuracy
        )
    }
}

fn run_fold(spec: &LearnerSpec, samples: &Samples, folds: &[usize], fold: usize, seed: u64) -> Result<FoldResult> {
    let (test, train): (Vec<usize>, Vec<usize>) = (0..samples.len()).partition(|&i| folds[i] == fold);
    let train_set = samples.subset(&train);
    let model = spec.train(&train_set, seed)?;
    let truths: Vec<usize> = test.iter().map(|&i| samples.label(i)).collect();
    let predictions = test
        .iter()
        .map(|&i| model.predict_index(samples.row(i)))
        .collect::<Result<Vec<_>>>()?;
    let confusion = ConfusionMatrix::from_indices(samples.classes().to_vec(), &truths, &predictions)?;
    let m = metrics(&confusion);
    Ok(FoldResult {
        fold,
        train_size: train.len(),
        test_size: test.len(),
        accuracy: m.accuracy,
        f_measure: m.f_measure,
        confusion,
    })
}

/// Stratified k-fold cross-validation. Fold `f` trains with seed
/// `seed + f`; folds run in parallel and are pooled in fold order.
pub fn cross_validate(spec: &LearnerSpec, ds: &Dataset, k: usize, seed: u64) -> Result<EvalReport> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset { failures: Vec::new() });
    }
    let samples = Samples::from_dataset(ds)?;
    let folds = stratify(samples.labels(), k, seed)?;

    let run = |f: usize| run_fold(spec, &samples, &folds, f, seed.wrapping_add(f as u64));
    #[cfg(feature = "parallel")]
    let results: Vec<Result<FoldResult>> = {
        use rayon::prelude::*;
        (0..k).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<FoldResult>> = (0..k).map(run).collect();
    let fold_results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut pooled = ConfusionMatrix::zeros(samples.classes().to_vec());
    for r in &fold_results {
        pooled.add(&r.confusion);
    }
    let fold_mean_f_measure = fold_results.iter().map(|r| r.f_measure).sum::<f64>() / k as f64;
    let fold_mean_accuracy = fold_results.iter().map(|r| r.accuracy).sum::<f64>() / k as f64;
    Ok(EvalReport {
        classifier: spec.display_name().to_string(),
        config: EvalConfig {
            learner: spec.clone(),
            folds: k,
            seed,
            aggregation: "pooled".into(),
        },
        metrics: metrics(&pooled),
        confusion: pooled,
        folds: fold_results,
        fold_mean_f_measure,
        fold_mean_accuracy,
    })
}
