//! Feature tables: batch extraction over an image directory, CSV/ARFF
//! persistence and stratified fold assignment.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::load_grayscale;
use crate::pipeline::{extract_features, ExtractionConfig};
use crate::texture::{attribute_names, FeatureVector, ATTRIBUTE_COUNT};

pub const CLASS_COLUMN: &str = "class";

const IMAGE_EXTENSIONS: [&str; 4] = ["pgm", "png", "tif", "tiff"];

/// Labelled feature rows sharing one attribute schema. Classes are kept in
/// sorted order, so class index order is lexicographic label order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    attributes: Vec<String>,
    instances: Vec<FeatureVector>,
    classes: Vec<String>,
}

impl Dataset {
    pub fn new(attributes: Vec<String>, instances: Vec<FeatureVector>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::Table("a dataset needs at least one attribute".into()));
        }
        for fv in &instances {
            if fv.values.len() != attributes.len() {
                return Err(Error::Arity {
                    expected: attributes.len(),
                    actual: fv.values.len(),
                });
            }
            if let Some(i) = fv.values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite(i));
            }
        }
        let classes: BTreeSet<&str> = instances.iter().map(|fv| fv.label.as_str()).collect();
        let classes = classes.into_iter().map(str::to_string).collect();
        Ok(Dataset {
            attributes,
            instances,
            classes,
        })
    }

    /// A dataset with the canonical 28 descriptor attributes.
    pub fn with_descriptor_schema(instances: Vec<FeatureVector>) -> Result<Self> {
        Self::new(attribute_names(), instances)
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn instances(&self) -> &[FeatureVector] {
        &self.instances
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Class index of every instance.
    pub fn label_indices(&self) -> Vec<usize> {
        self.instances
            .iter()
            .map(|fv| self.classes.binary_search(&fv.label).expect("label in classes"))
            .collect()
    }
}

/// A file the batch extractor could not turn into a row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub file: String,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub dataset: Dataset,
    pub failures: Vec<FailureRecord>,
}

/// Subject label of an FVC-style file name, `<subject>_<sample>.<ext>`.
pub fn subject_label(path: &Path) -> Option<String> {
    let stem = path.file_stem()?.to_str()?;
    let (subject, sample) = stem.split_once('_')?;
    (!subject.is_empty() && !sample.is_empty()).then(|| subject.to_string())
}

fn is_image_file(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

/// Image files directly under `root`, sorted by file name.
pub fn list_images(root: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(root, e))?.path();
        if is_image_file(&path) {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn extract_file(path: &Path, config: &ExtractionConfig) -> std::result::Result<FeatureVector, String> {
    let label = subject_label(path)
        .ok_or_else(|| "file name does not follow <subject>_<sample>.<ext>".to_string())?;
    let img = load_grayscale(path).map_err(|e| e.to_string())?;
    extract_features(&img, config, &label).map_err(|e| e.to_string())
}

/// Extracts one feature row per image under `root`. Files that fail are
/// recorded and skipped; rows keep file-name order whatever the completion
/// order of the workers.
pub fn build_dataset(root: &Path, config: &ExtractionConfig) -> Result<BuildOutcome> {
    config.validate()?;
    let files = list_images(root)?;

    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        files.par_iter().map(|p| extract_file(p, config)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = files.iter().map(|p| extract_file(p, config)).collect();

    let mut instances = Vec::new();
    let mut failures = Vec::new();
    for (path, result) in files.iter().zip(results) {
        match result {
            Ok(fv) => instances.push(fv),
            Err(error) => {
                log::warn!("skipping {}: {error}", path.display());
                failures.push(FailureRecord {
                    file: path.display().to_string(),
                    error,
                });
            }
        }
    }
    if instances.is_empty() {
        return Err(Error::EmptyDataset { failures });
    }
    log::info!(
        "extracted {} instance(s), {} failure(s)",
        instances.len(),
        failures.len()
    );
    Ok(BuildOutcome {
        dataset: Dataset::with_descriptor_schema(instances)?,
        failures,
    })
}

/// Failure log as one JSON object per line.
pub fn failures_to_jsonl(failures: &[FailureRecord]) -> String {
    failures
        .iter()
        .map(|f| serde_json::to_string(f).expect("failure record serializes") + "\n")
        .collect()
}

pub fn write_csv<W: std::io::Write>(ds: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let table_err = |e: csv::Error| Error::Table(e.to_string());
    let mut header: Vec<&str> = ds.attributes.iter().map(String::as_str).collect();
    header.push(CLASS_COLUMN);
    w.write_record(&header).map_err(table_err)?;
    for fv in &ds.instances {
        let mut row: Vec<String> = fv.values.iter().map(|v| v.to_string()).collect();
        row.push(fv.label.clone());
        w.write_record(&row).map_err(table_err)?;
    }
    w.flush().map_err(|e| Error::Table(e.to_string()))
}

pub fn export_csv(ds: &Dataset, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(ds, std::io::BufWriter::new(file))
}

/// Reads a feature table with the canonical 28-attribute header.
pub fn read_csv<R: std::io::Read>(reader: R) -> Result<Dataset> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = r.records();
    let header = records
        .next()
        .ok_or_else(|| Error::Table("empty file".into()))?
        .map_err(|e| Error::Table(e.to_string()))?;
    let columns: Vec<&str> = header.iter().collect();
    if columns.last() != Some(&CLASS_COLUMN) {
        return Err(Error::Table(format!(
            "last header column must be `{CLASS_COLUMN}`"
        )));
    }
    let attributes: Vec<String> = columns[..columns.len() - 1].iter().map(|s| s.to_string()).collect();
    if attributes.len() != ATTRIBUTE_COUNT {
        return Err(Error::Arity {
            expected: ATTRIBUTE_COUNT,
            actual: attributes.len(),
        });
    }
    if attributes != attribute_names() {
        return Err(Error::Table("header does not match the descriptor schema".into()));
    }
    let mut instances = Vec::new();
    for (line, record) in records.enumerate() {
        let record = record.map_err(|e| Error::Table(e.to_string()))?;
        if record.len() != ATTRIBUTE_COUNT + 1 {
            return Err(Error::Arity {
                expected: ATTRIBUTE_COUNT,
                actual: record.len().saturating_sub(1),
            });
        }
        let values = record
            .iter()
            .take(ATTRIBUTE_COUNT)
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| {
                    Error::Table(format!("row {}: bad number {s:?}", line + 2))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let label = record[ATTRIBUTE_COUNT].trim().to_string();
        if label.is_empty() {
            return Err(Error::Table(format!("row {}: empty class", line + 2)));
        }
        instances.push(FeatureVector { values, label });
    }
    Dataset::new(attributes, instances)
}

pub fn import_csv(path: &Path) -> Result<Dataset> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(std::io::BufReader::new(file))
}

/// Weka ARFF rendering for cross-checking with external tools.
pub fn to_arff(ds: &Dataset, relation: &str) -> String {
    let mut out = format!("@relation {relation}\n\n");
    for a in &ds.attributes {
        let _ = writeln!(out, "@attribute {a} numeric");
    }
    let _ = writeln!(out, "@attribute {CLASS_COLUMN} {{{}}}\n\n@data", ds.classes.join(","));
    for fv in &ds.instances {
        let row: Vec<String> = fv.values.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{},{}", row.join(","), fv.label);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub k: usize,
    pub seed: u64,
    /// Fold index of each instance.
    pub folds: Vec<usize>,
}

impl FoldAssignment {
    pub fn members(&self, fold: usize) -> Vec<usize> {
        (0..self.folds.len()).filter(|&i| self.folds[i] == fold).collect()
    }
}

/// Shuffles the members of each class (classes in index order) and deals
/// them round-robin into `k` folds, the dealing position carrying over from
/// one class to the next.
pub fn stratify(labels: &[usize], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {k}")));
    }
    if k > labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{k} folds for {} instances",
            labels.len()
        )));
    }
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &c) in labels.iter().enumerate() {
        by_class[c].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0; labels.len()];
    let mut next = 0;
    for members in &mut by_class {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            folds[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok(folds)
}

pub fn stratified_folds(ds: &Dataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    let folds = stratify(&ds.label_indices(), k, seed)?;
    Ok(FoldAssignment { k, seed, folds })
}
