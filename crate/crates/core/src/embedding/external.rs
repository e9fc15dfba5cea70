use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use tract_onnx::prelude::*;

use super::{Embedder, Embedding, InputSpec};
use crate::error::{Error, Result};
use crate::imaging::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelOrder {
    Rgb,
    Bgr,
}

/// How an image becomes the model's input tensor.
///
/// Each channel value `v` in `[0, 1]` is fed as `(v - mean[c]) / std[c]`, after
/// optional RGB to BGR reordering. The batch dimension is always 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TensorLayout {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    /// `true` for NCHW, `false` for NHWC.
    pub channels_first: bool,
    pub channel_order: ChannelOrder,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Default for TensorLayout {
    fn default() -> Self {
        TensorLayout {
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

impl TensorLayout {
    pub fn validate(&self) -> Result<()> {
        if self.height == 0 || self.width == 0 {
            return Err(Error::Config("model input size must be positive".into()));
        }
        if self.channels != 1 && self.channels != 3 {
            return Err(Error::Config(format!(
                "model input must have 1 or 3 channels, got {}",
                self.channels
            )));
        }
        if self.mean.len() != self.channels || self.std.len() != self.channels {
            return Err(Error::Config(format!(
                "mean/std need {} values each, got {}/{}",
                self.channels,
                self.mean.len(),
                self.std.len()
            )));
        }
        if self.std.iter().any(|s| *s == 0.0 || !s.is_finite()) {
            return Err(Error::Config("std values must be finite and non-zero".into()));
        }
        Ok(())
    }

    fn shape(&self) -> [usize; 4] {
        if self.channels_first {
            [1, self.channels, self.height, self.width]
        } else {
            [1, self.height, self.width, self.channels]
        }
    }

    fn to_tensor_data(&self, img: &Image) -> Vec<f32> {
        let (h, w, c) = (self.height, self.width, self.channels);
        let source_channel = |ch: usize| match self.channel_order {
            ChannelOrder::Bgr if c == 3 => 2 - ch,
            _ => ch,
        };
        let value = |y: usize, x: usize, ch: usize| {
            let v = img.get(y, x, source_channel(ch));
            ((v - self.mean[ch]) / self.std[ch]) as f32
        };
        let mut data = Vec::with_capacity(h * w * c);
        if self.channels_first {
            for ch in 0..c {
                for y in 0..h {
                    for x in 0..w {
                        data.push(value(y, x, ch));
                    }
                }
            }
        } else {
            for y in 0..h {
                for x in 0..w {
                    for ch in 0..c {
                        data.push(value(y, x, ch));
                    }
                }
            }
        }
        data
    }
}

/// A user-supplied ONNX model run through the tract inference engine.
///
/// The embedding is the model's first output, flattened.
#[derive(Clone)]
pub struct ExternalModelEmbedder {
    path: PathBuf,
    layout: TensorLayout,
    plan: Arc<TypedRunnableModel>,
}

impl std::fmt::Debug for ExternalModelEmbedder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExternalModelEmbedder")
            .field("path", &self.path)
            .field("layout", &self.layout)
            .finish_non_exhaustive()
    }
}

fn inference_error(e: impl std::fmt::Display) -> Error {
    Error::Inference(format!("{e:#}"))
}

impl ExternalModelEmbedder {
    pub fn load(path: impl AsRef<Path>, layout: TensorLayout) -> Result<Self> {
        let path = path.as_ref();
        layout.validate()?;
        if !path.exists() {
            return Err(Error::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "model file not found"),
            ));
        }
        let plan = tract_onnx::onnx()
            .model_for_path(path)
            .and_then(|m| m.with_input_fact(0, f32::fact(layout.shape()).into()))
            .and_then(|m| m.into_optimized())
            .and_then(|m| m.into_runnable())
            .map_err(|e| Error::Inference(format!("loading {}: {e:#}", path.display())))?;
        Ok(ExternalModelEmbedder {
            path: path.to_path_buf(),
            layout,
            plan,
        })
    }

    pub fn layout(&self) -> &TensorLayout {
        &self.layout
    }
}

impl Embedder for ExternalModelEmbedder {
    fn name(&self) -> String {
        format!("onnx:{}", self.path.display())
    }

    fn input_spec(&self) -> InputSpec {
        InputSpec::exact(self.layout.height, self.layout.width, self.layout.channels)
    }

    fn forward(&self, img: &Image) -> Result<Embedding> {
        let data = self.layout.to_tensor_data(img);
        let tensor = Tensor::from_shape(&self.layout.shape(), &data).map_err(inference_error)?;
        let outputs = self
            .plan
            .run(tvec!(tensor.into_tvalue()))
            .map_err(inference_error)?;
        let first = outputs
            .first()
            .ok_or_else(|| Error::Inference("model produced no outputs".into()))?;
        let view = first.to_plain_array_view::<f32>().map_err(inference_error)?;
        Embedding::new(view.iter().map(|v| f64::from(*v)).collect())
    }
}
