//! Run settings: defaults, then a `key = value` config file, then flags.
//!
//! Config grammar: one `key = value` pair per line; blank lines and lines
//! starting with `#` are ignored, as is anything after a ` #` on a line.
//! Keys are listed in [`RunConfig::set`].

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use srise_core::embedding::ChannelOrder;
use srise_core::evaluation::MetricConfig;
use srise_core::explainer::{ExplainConfig, ReweightMode, TripletMasks, Weighting};
use srise_core::masks::MergeRule;

#[derive(Debug, Clone, PartialEq)]
pub enum EmbedderSpec {
    PatchMean { grid: usize },
    RandomProjection { dim: usize, seed: u64 },
    Model { path: PathBuf },
}

/// Input geometry and normalization for an external model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelLayout {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub channels_first: bool,
    pub channel_order: ChannelOrder,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Default for ModelLayout {
    fn default() -> Self {
        ModelLayout {
            height: 112,
            width: 112,
            channels: 3,
            channels_first: true,
            channel_order: ChannelOrder::Rgb,
            mean: vec![0.5; 3],
            std: vec![0.5; 3],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub explain: ExplainConfig,
    pub metric: MetricConfig,
    pub embedder: EmbedderSpec,
    pub layout: ModelLayout,
    /// Resize every input to this size; defaults to the first image's size
    /// (or the model's input size).
    pub image_size: Option<(usize, usize)>,
    pub out: PathBuf,
    /// Mask counts evaluated by `eval`.
    pub iterations: Vec<usize>,
    pub margin: f64,
    pub overlay_alpha: f64,
    pub randomized_dim: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            explain: ExplainConfig::default(),
            metric: MetricConfig::default(),
            embedder: EmbedderSpec::PatchMean { grid: 4 },
            layout: ModelLayout::default(),
            image_size: None,
            out: PathBuf::from("srise-out"),
            iterations: vec![10, 100, 500, 1000],
            margin: srise_core::sanity::DEFAULT_MARGIN,
            overlay_alpha: 0.5,
            randomized_dim: srise_core::RandomizedEmbedder::DEFAULT_DIM,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| anyhow!("invalid value '{value}' for '{key}'"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => bail!("invalid value '{value}' for '{key}' (expected true or false)"),
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|v| parse(key, v.trim()))
        .collect()
}

fn parse_size(key: &str, value: &str) -> Result<(usize, usize)> {
    let (h, w) = value
        .split_once('x')
        .ok_or_else(|| anyhow!("invalid value '{value}' for '{key}' (expected HxW)"))?;
    Ok((parse(key, h.trim())?, parse(key, w.trim())?))
}

impl RunConfig {
    /// Applies one setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let masks = &mut self.explain.masks;
        match key {
            "seed" => self.seed = parse(key, value)?,
            "masks" => masks.num_masks = parse(key, value)?,
            "kernels" => masks.kernels_per_mask = parse(key, value)?,
            "kernel_size" => masks.kernel_size = parse(key, value)?,
            "sigma" => masks.sigma = Some(parse(key, value)?),
            "amplitude" => masks.amplitude = parse(key, value)?,
            "merge" => {
                masks.merge = match value {
                    "max" => MergeRule::Max,
                    "sum_clip" => MergeRule::SumClip,
                    _ => bail!("invalid value '{value}' for '{key}' (expected max or sum_clip)"),
                }
            }
            "normalize" => self.explain.normalize = parse_bool(key, value)?,
            "reweight" => {
                self.explain.reweight = match value {
                    "ratio" => ReweightMode::Ratio,
                    "none" => ReweightMode::None,
                    _ => bail!("invalid value '{value}' for '{key}' (expected ratio or none)"),
                }
            }
            "weighting" => {
                self.explain.weighting = match value {
                    "coverage" => Weighting::Coverage,
                    "raw" => Weighting::Raw,
                    _ => bail!("invalid value '{value}' for '{key}' (expected coverage or raw)"),
                }
            }
            "triplet_masks" => {
                self.explain.triplet_masks = match value {
                    "fresh" => TripletMasks::Fresh,
                    "shared" => TripletMasks::Shared,
                    _ => bail!("invalid value '{value}' for '{key}' (expected fresh or shared)"),
                }
            }
            "workers" => self.explain.workers = parse(key, value)?,
            "threshold" => self.metric.threshold = parse(key, value)?,
            "step" => self.metric.step = parse(key, value)?,
            "max_fraction" => self.metric.max_fraction = parse(key, value)?,
            "embedder" => self.embedder = parse_embedder(value)?,
            "model" => {
                self.embedder = EmbedderSpec::Model {
                    path: PathBuf::from(value),
                }
            }
            "model_size" => {
                (self.layout.height, self.layout.width) = parse_size(key, value)?;
            }
            "model_channels" => self.layout.channels = parse(key, value)?,
            "model_layout" => {
                self.layout.channels_first = match value {
                    "nchw" => true,
                    "nhwc" => false,
                    _ => bail!("invalid value '{value}' for '{key}' (expected nchw or nhwc)"),
                }
            }
            "model_channel_order" => {
                self.layout.channel_order = match value {
                    "rgb" => ChannelOrder::Rgb,
                    "bgr" => ChannelOrder::Bgr,
                    _ => bail!("invalid value '{value}' for '{key}' (expected rgb or bgr)"),
                }
            }
            "model_mean" => self.layout.mean = parse_list(key, value)?,
            "model_std" => self.layout.std = parse_list(key, value)?,
            "image_size" => self.image_size = Some(parse_size(key, value)?),
            "out" => self.out = PathBuf::from(value),
            "iterations" => self.iterations = parse_list(key, value)?,
            "margin" => self.margin = parse(key, value)?,
            "overlay_alpha" => self.overlay_alpha = parse(key, value)?,
            "randomized_dim" => self.randomized_dim = parse(key, value)?,
            _ => bail!("unknown key '{key}'"),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str, origin: &Path) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = match line.find(" #") {
                Some(i) => &line[..i],
                None => line,
            }
            .trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = || format!("config {}:{}", origin.display(), n + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("expected 'key = value', got '{line}'"))
                .with_context(at)?;
            self.set(key.trim(), value.trim()).with_context(at)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        self.apply_text(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        self.explain.masks.validate()?;
        self.metric.validate()?;
        if self.iterations.is_empty() || self.iterations.contains(&0) {
            bail!("iterations must be a non-empty list of positive mask counts");
        }
        if !(0.0..=1.0).contains(&self.overlay_alpha) {
            bail!("overlay_alpha must lie in [0, 1]");
        }
        Ok(())
    }
}

/// `patch-mean[:GRID]` or `random-projection[:DIM[:SEED]]`.
pub fn parse_embedder(value: &str) -> Result<EmbedderSpec> {
    let mut parts = value.split(':');
    let name = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let spec = match (name, args.as_slice()) {
        ("patch-mean", []) => EmbedderSpec::PatchMean { grid: 4 },
        ("patch-mean", [g]) => EmbedderSpec::PatchMean {
            grid: parse("embedder", g)?,
        },
        ("random-projection", []) => EmbedderSpec::RandomProjection { dim: 128, seed: 0 },
        ("random-projection", [d]) => EmbedderSpec::RandomProjection {
            dim: parse("embedder", d)?,
            seed: 0,
        },
        ("random-projection", [d, s]) => EmbedderSpec::RandomProjection {
            dim: parse("embedder", d)?,
            seed: parse("embedder", s)?,
        },
        _ => bail!(
            "unknown embedder '{value}' (expected patch-mean[:GRID] or random-projection[:DIM[:SEED]])"
        ),
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_and_comments() {
        let mut cfg = RunConfig::default();
        let text = "# experiment\nseed = 7\nmasks=250 # fewer\n\nthreshold = 0.8\nembedder = patch-mean:2\niterations = 10, 100\nmodel_mean = 0.1,0.2,0.3\n";
        cfg.apply_text(text, Path::new("run.cfg")).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.explain.masks.num_masks, 250);
        assert_eq!(cfg.metric.threshold, 0.8);
        assert_eq!(cfg.embedder, EmbedderSpec::PatchMean { grid: 2 });
        assert_eq!(cfg.iterations, vec![10, 100]);
        assert_eq!(cfg.layout.mean, vec![0.1, 0.2, 0.3]);
    }

    #[test]
    fn errors_name_file_and_line() {
        let mut cfg = RunConfig::default();
        let err = cfg
            .apply_text("seed = 1\nbogus = 2\n", Path::new("x.cfg"))
            .unwrap_err();
        assert!(format!("{err:#}").contains("x.cfg:2"), "{err:#}");
        let err = cfg.apply_text("masks: 3\n", Path::new("x.cfg")).unwrap_err();
        assert!(format!("{err:#}").contains("x.cfg:1"));
        assert!(cfg.set("masks", "many").is_err());
        assert!(cfg.set("normalize", "maybe").is_err());
    }

    #[test]
    fn embedder_names() {
        assert_eq!(
            parse_embedder("random-projection:64:9").unwrap(),
            EmbedderSpec::RandomProjection { dim: 64, seed: 9 }
        );
        assert!(parse_embedder("resnet").is_err());
        assert!(parse_embedder("patch-mean:x").is_err());
    }
}
