use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_embedder, EmbedderSpec, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "srise", version, about = "Saliency maps for image-pair similarity models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Explain one image pair: a map for each image.
    Explain {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Explain a probe/mate/nonmate triplet with pair weighting.
    Triplet {
        probe: PathBuf,
        mate: PathBuf,
        nonmate: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Deletion/insertion evaluation over a dataset of triplet folders.
    Eval {
        dataset: PathBuf,
        /// Comma-separated mask counts, one table row each.
        #[arg(long, value_delimiter = ',')]
        iterations: Option<Vec<usize>>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Model-randomization sanity check on one pair; exits 1 if it fails.
    Sanity {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        margin: Option<f64>,
        /// Use the randomized model in both roles (the check must fail).
        #[arg(long)]
        control: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write a synthetic triplet dataset.
    GenFixtures {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = srise_core::fixtures::FIXTURE_SIZE)]
        size: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Flat `key = value` settings file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of masks.
    #[arg(long)]
    pub masks: Option<usize>,
    /// Gaussian kernels per mask.
    #[arg(long)]
    pub kernels: Option<usize>,
    /// Odd kernel side in pixels.
    #[arg(long)]
    pub kernel_size: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Similarity threshold for deletion/insertion.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Pixels changed per deletion/insertion round.
    #[arg(long)]
    pub step: Option<usize>,
    /// Worker threads (0 = all cores); never changes results.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// patch-mean[:GRID] or random-projection[:DIM[:SEED]].
    #[arg(long, conflicts_with = "model")]
    pub embedder: Option<String>,
    /// ONNX model file.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

impl CommonArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let masks = &mut cfg.explain.masks;
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.masks {
            masks.num_masks = v;
        }
        if let Some(v) = self.kernels {
            masks.kernels_per_mask = v;
        }
        if let Some(v) = self.kernel_size {
            masks.kernel_size = v;
        }
        if let Some(v) = self.sigma {
            masks.sigma = Some(v);
        }
        if let Some(v) = self.threshold {
            cfg.metric.threshold = v;
        }
        if let Some(v) = self.step {
            cfg.metric.step = v;
        }
        if let Some(v) = self.workers {
            cfg.explain.workers = v;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = &self.embedder {
            cfg.embedder = parse_embedder(v)?;
        }
        if let Some(v) = &self.model {
            cfg.embedder = EmbedderSpec::Model { path: v.clone() };
        }
        Ok(cfg)
    }
}
