mod eval;
mod explain;
mod sanity;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use log::info;
use srise_core::embedding::{Embedder, PatchMeanEmbedder, RandomProjectionEmbedder};
use srise_core::imaging::{load_image, Image};

use crate::args::{Cli, Command};
use crate::config::{EmbedderSpec, RunConfig};
use crate::output::OutDir;

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Explain {
            first,
            second,
            common,
        } => explain::pair(&first, &second, &checked(common.resolve()?)?),
        Command::Triplet {
            probe,
            mate,
            nonmate,
            common,
        } => explain::triplet([&probe, &mate, &nonmate], &checked(common.resolve()?)?),
        Command::Eval {
            dataset,
            iterations,
            common,
        } => {
            let mut cfg = common.resolve()?;
            if let Some(n) = iterations {
                cfg.iterations = n;
            }
            eval::dataset(&dataset, &checked(cfg)?)
        }
        Command::Sanity {
            first,
            second,
            margin,
            control,
            common,
        } => {
            let mut cfg = common.resolve()?;
            if let Some(m) = margin {
                cfg.margin = m;
            }
            sanity::pair(&first, &second, &checked(cfg)?, control)
        }
        Command::GenFixtures {
            count,
            size,
            common,
        } => {
            let cfg = checked(common.resolve()?)?;
            let triplets = srise_core::fixtures::fixture_suite(count, size, cfg.seed)?;
            srise_core::fixtures::write_dataset(&cfg.out, &triplets)?;
            info!("wrote {count} triplets to {}", cfg.out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn checked(cfg: RunConfig) -> Result<RunConfig> {
    cfg.validate()?;
    Ok(cfg)
}

fn to_channels(img: Image, channels: usize) -> Image {
    match (img.channels(), channels) {
        (3, 1) => img.grayscale(),
        (1, 3) => Image::from_fn(img.height(), img.width(), 3, |y, x, _| img.get(y, x, 0))
            .expect("replicated gray values are in range"),
        _ => img,
    }
}

/// Loads every input at one size and channel count: the model's, or else the
/// configured size (first image's by default) with RGB if any input has color.
pub fn load_inputs(paths: &[&Path], cfg: &RunConfig) -> Result<Vec<Image>> {
    let (size, channels) = match &cfg.embedder {
        EmbedderSpec::Model { .. } => (
            Some((cfg.layout.height, cfg.layout.width)),
            Some(cfg.layout.channels),
        ),
        _ => (cfg.image_size, None),
    };
    let mut images = Vec::with_capacity(paths.len());
    let mut target = size;
    for path in paths {
        let img = match target {
            Some(t) => load_image(path, t)?,
            None => {
                let img = srise_core::imaging::load_image_native(path)?;
                target = Some(img.dims());
                img
            }
        };
        images.push(img);
    }
    let channels =
        channels.unwrap_or_else(|| images.iter().map(|i| i.channels()).max().unwrap_or(3));
    Ok(images
        .into_iter()
        .map(|img| to_channels(img, channels))
        .collect())
}

pub fn build_embedder(cfg: &RunConfig, sample: &Image) -> Result<Box<dyn Embedder>> {
    let e: Box<dyn Embedder> = match &cfg.embedder {
        EmbedderSpec::PatchMean { grid } => Box::new(PatchMeanEmbedder::new(*grid)?),
        EmbedderSpec::RandomProjection { dim, seed } => Box::new(RandomProjectionEmbedder::new(
            *dim,
            *seed,
            sample.height(),
            sample.width(),
            sample.channels(),
        )?),
        EmbedderSpec::Model { path } => load_model(path, cfg)?,
    };
    info!("embedder {}", e.name());
    Ok(e)
}

#[cfg(feature = "onnx")]
fn load_model(path: &Path, cfg: &RunConfig) -> Result<Box<dyn Embedder>> {
    use srise_core::embedding::{ExternalModelEmbedder, TensorLayout};
    let l = &cfg.layout;
    let layout = TensorLayout {
        height: l.height,
        width: l.width,
        channels: l.channels,
        channels_first: l.channels_first,
        channel_order: l.channel_order,
        mean: l.mean.clone(),
        std: l.std.clone(),
    };
    Ok(Box::new(ExternalModelEmbedder::load(path, layout)?))
}

#[cfg(not(feature = "onnx"))]
fn load_model(path: &Path, _cfg: &RunConfig) -> Result<Box<dyn Embedder>> {
    bail!(
        "cannot load {}: this build has no ONNX support (enable the `onnx` feature)",
        path.display()
    )
}

pub fn out_dir(cfg: &RunConfig) -> Result<OutDir> {
    OutDir::create(&cfg.out)
}

pub fn display_paths(paths: &[&Path]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

/// Triplet folders of a dataset, sorted by name.
pub fn triplet_dirs(dataset: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dataset).map_err(|e| {
        anyhow::anyhow!("cannot read dataset directory {}: {e}", dataset.display())
    })?;
    let mut dirs = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.is_dir() {
            dirs.push(path);
        }
    }
    dirs.sort();
    if dirs.is_empty() {
        bail!("dataset {} has no triplet folders", dataset.display());
    }
    for dir in &dirs {
        for name in ["probe.png", "mate.png", "nonmate.png"] {
            let file = dir.join(name);
            if !file.is_file() {
                bail!("malformed dataset: missing {}", file.display());
            }
        }
    }
    Ok(dirs)
}
