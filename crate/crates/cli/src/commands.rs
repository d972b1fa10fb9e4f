use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use fpid::dataset::{build_dataset, export_csv, failures_to_jsonl, import_csv, Dataset};
use fpid::evaluation::{cross_validate, EvalReport};
use fpid::imaging::{encode_pgm, load_grayscale, save_rgb_png};
use fpid::orientation::render_core_overlay;
use fpid::pipeline::trace_features;
use fpid::report::{accuracy_svg, prf_svg, ranking, results_csv};
use fpid::synth::{write_corpus, CorpusSpec};
use fpid::texture::{glcm, Angle, Offset};
use serde::Serialize;

use crate::config::PipelineConfig;

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn ensure_out(out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))
}

pub fn extract(config: &PipelineConfig, root: &Path) -> Result<Dataset> {
    ensure_out(&config.out)?;
    let failures_path = config.out.join("failures.jsonl");
    let outcome = match build_dataset(root, &config.extraction()) {
        Ok(o) => o,
        Err(fpid::Error::EmptyDataset { failures }) => {
            write(&failures_path, failures_to_jsonl(&failures))?;
            anyhow::bail!(
                "no usable images under {}: {} file(s) failed, see {}",
                root.display(),
                failures.len(),
                failures_path.display()
            );
        }
        Err(e) => return Err(e.into()),
    };
    write(&failures_path, failures_to_jsonl(&outcome.failures))?;
    let features = config.out.join("features.csv");
    export_csv(&outcome.dataset, &features)?;
    println!(
        "{} instances and {} attributes ({} classes, {} failure(s)) -> {}",
        outcome.dataset.len(),
        outcome.dataset.attributes().len(),
        outcome.dataset.classes().len(),
        outcome.failures.len(),
        features.display()
    );
    Ok(outcome.dataset)
}

#[derive(Serialize)]
struct ResultsDocument<'a> {
    config: &'a PipelineConfig,
    instances: usize,
    attributes: usize,
    classes: &'a [String],
    reports: &'a [EvalReport],
}

pub fn evaluate(config: &PipelineConfig, ds: &Dataset) -> Result<Vec<EvalReport>> {
    ensure_out(&config.out)?;
    let specs = config.learner_specs()?;
    let mut reports = Vec::with_capacity(specs.len());
    for spec in &specs {
        log::info!("cross-validating {} ({} folds)", spec.display_name(), config.folds);
        let report = cross_validate(spec, ds, config.folds, config.seed)
            .with_context(|| format!("evaluating {}", spec.display_name()))?;
        reports.push(report);
    }
    let doc = ResultsDocument {
        config,
        instances: ds.len(),
        attributes: ds.attributes().len(),
        classes: ds.classes(),
        reports: &reports,
    };
    let table = results_csv(&reports);
    write(&config.out.join("results.csv"), &table)?;
    write(&config.out.join("results.json"), serde_json::to_string_pretty(&doc)? + "\n")?;
    write(&config.out.join("accuracy.svg"), accuracy_svg(&reports))?;
    write(&config.out.join("prf.svg"), prf_svg(&reports))?;
    print!("{table}");
    Ok(reports)
}

pub fn evaluate_file(config: &PipelineConfig) -> Result<Vec<EvalReport>> {
    let path = config.features_path();
    let ds = import_csv(&path).with_context(|| format!("reading features from {}", path.display()))?;
    evaluate(config, &ds)
}

pub fn pipeline(config: &PipelineConfig, root: &Path) -> Result<()> {
    let ds = extract(config, root)?;
    let reports = evaluate(config, &ds)?;
    println!("ranking by weighted F-measure:");
    for (i, r) in ranking(&reports).iter().enumerate() {
        println!("  {}. {} ({:.3})", i + 1, r.classifier, r.metrics.f_measure);
    }
    Ok(())
}

#[derive(Serialize)]
struct InspectSummary<'a> {
    image: &'a Path,
    width: usize,
    height: usize,
    core: fpid::orientation::CorePoint,
    features: &'a fpid::texture::FeatureVector,
    attributes: Vec<String>,
}

/// Dumps every intermediate product of one extraction into `dir`.
pub fn inspect(config: &PipelineConfig, image: &Path, dir: &Path) -> Result<()> {
    ensure_out(dir)?;
    let img = load_grayscale(image)?;
    let trace = trace_features(&img, &config.extraction(), "inspect")?;
    write(&dir.join("orientation.csv"), trace.field.to_csv())?;
    write(&dir.join("region.pgm"), encode_pgm(&trace.region))?;
    write(&dir.join("enhanced.pgm"), encode_pgm(&trace.enhanced))?;
    for &d in &config.distances {
        for angle in Angle::ALL {
            if let Ok(g) = glcm(&trace.quantized, Offset::new(d, angle)?) {
                write(&dir.join(format!("glcm_d{d}_a{}.csv", angle.degrees())), g.to_csv())?;
            }
        }
    }
    let overlay = render_core_overlay(&img, &trace.field, &trace.core);
    save_rgb_png(img.width(), img.height(), &overlay, &dir.join("overlay.png"))?;
    let summary = InspectSummary {
        image,
        width: img.width(),
        height: img.height(),
        core: trace.core,
        features: &trace.features,
        attributes: fpid::texture::attribute_names(),
    };
    write(&dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    println!(
        "core at ({}, {}){}, Poincare index {:.3}; outputs in {}",
        trace.core.x,
        trace.core.y,
        if trace.core.fallback { " [fallback: image centre]" } else { "" },
        trace.core.poincare_value,
        dir.display()
    );
    Ok(())
}

pub fn synth(spec: &CorpusSpec, dir: &Path) -> Result<()> {
    let corpus = write_corpus(spec, dir)?;
    println!("wrote {} images to {}", corpus.len(), dir.display());
    Ok(())
}
