mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fpid::synth::CorpusSpec;

use config::PipelineConfig;

const AFTER_HELP: &str = "\
Configuration: --config names a TOML file of flat key = value pairs; flags
override it and every key has a default. Print the defaults with
`fpid config`. Defaults: levels 8, crop_size 100, distances [1, 2, 3],
block_size 8, diffusion sigma 0.5 / rho 4 / alpha 0.001 / contrast 1e-4 /
dt 0.15 / 20 steps, folds 10, seed 1, all five learners, 100 forest trees,
J48 confidence 0.25, min_leaf 2, REPTree pruning fraction 1/3.

Exit status: 0 on success, 1 when a run fails, 2 on usage errors such as a
missing --root.";

#[derive(Parser)]
#[command(name = "fpid", version, about = "Texture-based fingerprint identification pipeline", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: fpid-out]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads, 0 for all cores
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Master seed for folds and randomized learners
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args, Clone, Default)]
struct ExtractArgs {
    /// Directory of <subject>_<impression>.{pgm,png,tif} images
    #[arg(long)]
    root: Option<PathBuf>,
    /// Gray levels K for quantization
    #[arg(long)]
    levels: Option<usize>,
    /// Co-occurrence distances, comma separated
    #[arg(long, value_delimiter = ',')]
    distances: Option<Vec<usize>>,
}

#[derive(Args, Clone, Default)]
struct EvalArgs {
    /// Cross-validation folds
    #[arg(long)]
    folds: Option<usize>,
    /// Learners, comma separated: j48, random_forest, random_tree, rep_tree, decision_stump
    #[arg(long, value_delimiter = ',')]
    learners: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the 28-attribute feature table from an image directory
    Extract {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        extract: ExtractArgs,
    },
    /// Cross-validate learners on a feature table
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        eval: EvalArgs,
        /// Feature CSV [default: <out>/features.csv]
        #[arg(long)]
        features: Option<PathBuf>,
    },
    /// Extract then evaluate, and print the learner ranking
    Pipeline {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        extract: ExtractArgs,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Dump orientation field, core overlay, enhanced region and GLCMs for one image
    Inspect {
        #[command(flatten)]
        common: Common,
        /// Image to inspect
        image: PathBuf,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        distances: Option<Vec<usize>>,
    },
    /// Write a synthetic loop-fingerprint corpus
    Synth {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        subjects: usize,
        #[arg(long, default_value_t = 8)]
        impressions: usize,
        /// Image width and height in pixels
        #[arg(long, default_value_t = 192)]
        size: usize,
    },
    /// Print the effective configuration as TOML
    Config {
        #[command(flatten)]
        common: Common,
    },
}

struct UsageError(String);

fn resolve(common: &Common, extract: Option<&ExtractArgs>, eval: Option<&EvalArgs>) -> anyhow::Result<PipelineConfig> {
    let mut c = match &common.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(v) = &common.out {
        c.out = v.clone();
    }
    if let Some(v) = common.threads {
        c.threads = v;
    }
    if let Some(v) = common.seed {
        c.seed = v;
    }
    if let Some(e) = extract {
        if let Some(v) = &e.root {
            c.root = Some(v.clone());
        }
        if let Some(v) = e.levels {
            c.levels = v;
        }
        if let Some(v) = &e.distances {
            c.distances = v.clone();
        }
    }
    if let Some(e) = eval {
        if let Some(v) = e.folds {
            c.folds = v;
        }
        if let Some(v) = &e.learners {
            c.learners = v.clone();
        }
    }
    Ok(c)
}

fn require_root(c: &PipelineConfig) -> Result<PathBuf, UsageError> {
    let root = c
        .root
        .clone()
        .ok_or_else(|| UsageError("no image root: pass --root or set `root` in the config file".into()))?;
    if !root.is_dir() {
        return Err(UsageError(format!("image root {} is not a directory", root.display())));
    }
    Ok(root)
}

fn init_threads(n: usize) {
    if n > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool already initialised: {e}");
        }
    }
}

enum Failure {
    Usage(String),
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Run(e)
    }
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Extract { common, extract } => {
            let c = resolve(&common, Some(&extract), None)?;
            init_threads(c.threads);
            let root = require_root(&c)?;
            commands::extract(&c, &root)?;
        }
        Command::Evaluate { common, eval, features } => {
            let mut c = resolve(&common, None, Some(&eval))?;
            if features.is_some() {
                c.features = features;
            }
            init_threads(c.threads);
            commands::evaluate_file(&c)?;
        }
        Command::Pipeline { common, extract, eval } => {
            let c = resolve(&common, Some(&extract), Some(&eval))?;
            init_threads(c.threads);
            let root = require_root(&c)?;
            commands::pipeline(&c, &root)?;
        }
        Command::Inspect {
            common,
            image,
            levels,
            distances,
        } => {
            let extract = ExtractArgs {
                root: None,
                levels,
                distances,
            };
            let c = resolve(&common, Some(&extract), None)?;
            let dir = c.out.join(format!(
                "inspect-{}",
                image.file_stem().and_then(|s| s.to_str()).unwrap_or("image")
            ));
            commands::inspect(&c, &image, &dir)?;
        }
        Command::Synth {
            common,
            subjects,
            impressions,
            size,
        } => {
            let c = resolve(&common, None, None)?;
            let spec = CorpusSpec {
                subjects,
                impressions,
                width: size,
                height: size,
                seed: common.seed.unwrap_or(CorpusSpec::default().seed),
            };
            commands::synth(&spec, &c.out)?;
        }
        Command::Config { common } => {
            let c = resolve(&common, None, None)?;
            print!("{}", c.to_toml());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
