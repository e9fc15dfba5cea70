//! The black-box model boundary.
//!
//! An [`Embedder`] maps an [`Image`] to an [`Embedding`]; nothing else about
//! the model is visible to the explainer or the metrics.

#[cfg(feature = "onnx")]
mod external;
mod patch_mean;
mod projection;

use std::fmt;

use crate::error::{Error, Result};
use crate::imaging::Image;

#[cfg(feature = "onnx")]
pub use external::{ChannelOrder, ExternalModelEmbedder, TensorLayout};
pub use patch_mean::PatchMeanEmbedder;
pub use projection::{RandomProjectionEmbedder, RandomizedEmbedder};

/// Norms below this make cosine similarity undefined.
pub const MIN_NORM: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding(Vec<f64>);

impl Embedding {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input("embedding must have at least one dimension".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Inference("embedding contains non-finite values".into()));
        }
        Ok(Embedding(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Whether an embedder tolerates concurrent `embed` calls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Concurrency {
    Parallel,
    Serial,
}

/// Accepted input geometry; `None` accepts any size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputSpec {
    pub height: Option<usize>,
    pub width: Option<usize>,
    /// `None` accepts both 1 and 3 channels.
    pub channels: Option<usize>,
}

impl InputSpec {
    pub fn any() -> Self {
        InputSpec {
            height: None,
            width: None,
            channels: None,
        }
    }

    pub fn exact(height: usize, width: usize, channels: usize) -> Self {
        InputSpec {
            height: Some(height),
            width: Some(width),
            channels: Some(channels),
        }
    }

    pub fn check(&self, img: &Image) -> Result<()> {
        let mismatch = |what: &str, want: usize, got: usize| {
            Err(Error::Dimension(format!(
                "embedder expects {what} {want}, image has {got}"
            )))
        };
        if let Some(h) = self.height.filter(|&h| h != img.height()) {
            return mismatch("height", h, img.height());
        }
        if let Some(w) = self.width.filter(|&w| w != img.width()) {
            return mismatch("width", w, img.width());
        }
        if let Some(c) = self.channels.filter(|&c| c != img.channels()) {
            return mismatch("channels", c, img.channels());
        }
        Ok(())
    }
}

impl fmt::Display for InputSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |v: Option<usize>| v.map_or("*".to_string(), |v| v.to_string());
        write!(
            f,
            "{}x{}x{}",
            part(self.height),
            part(self.width),
            part(self.channels)
        )
    }
}

/// A deterministic image-to-vector function with a constant output dimension.
pub trait Embedder: Send + Sync {
    fn name(&self) -> String;

    fn input_spec(&self) -> InputSpec;

    /// Runs the model on an image that already passed [`InputSpec::check`].
    fn forward(&self, img: &Image) -> Result<Embedding>;

    fn concurrency(&self) -> Concurrency {
        Concurrency::Parallel
    }

    fn embed(&self, img: &Image) -> Result<Embedding> {
        self.input_spec().check(img)?;
        self.forward(img)
    }
}

impl<E: Embedder + ?Sized> Embedder for Box<E> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn input_spec(&self) -> InputSpec {
        (**self).input_spec()
    }

    fn forward(&self, img: &Image) -> Result<Embedding> {
        (**self).forward(img)
    }

    fn concurrency(&self) -> Concurrency {
        (**self).concurrency()
    }
}

/// `dot(a, b) / (|a| |b|)`, clamped to `[-1, 1]`.
pub fn cosine_similarity(a: &Embedding, b: &Embedding) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "cannot compare embeddings of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let (na, nb) = (a.norm(), b.norm());
    for n in [na, nb] {
        if n < MIN_NORM {
            return Err(Error::DegenerateEmbedding { norm: n });
        }
    }
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Embeds both images and returns their cosine similarity.
pub fn pair_similarity(e: &dyn Embedder, a: &Image, b: &Image) -> Result<f64> {
    cosine_similarity(&e.embed(a)?, &e.embed(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn emb(v: &[f64]) -> Embedding {
        Embedding::new(v.to_vec()).unwrap()
    }

    #[test]
    fn closed_form_similarities() {
        assert_eq!(cosine_similarity(&emb(&[1., 2., 3.]), &emb(&[1., 2., 3.])).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&emb(&[1., 0.]), &emb(&[0., 1.])).unwrap(), 0.0);
        let s = cosine_similarity(&emb(&[1., 0.]), &emb(&[1., 1.])).unwrap();
        assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_mismatched() {
        assert!(matches!(
            cosine_similarity(&emb(&[0., 0.]), &emb(&[1., 1.])),
            Err(Error::DegenerateEmbedding { .. })
        ));
        assert!(matches!(
            cosine_similarity(&emb(&[1e-13]), &emb(&[1.])),
            Err(Error::DegenerateEmbedding { .. })
        ));
        assert!(matches!(
            cosine_similarity(&emb(&[1.]), &emb(&[1., 1.])),
            Err(Error::Dimension(_))
        ));
        assert!(Embedding::new(vec![]).is_err());
        assert!(Embedding::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn input_spec_checks() {
        let img = Image::filled(4, 5, 3, 0.1).unwrap();
        assert!(InputSpec::any().check(&img).is_ok());
        assert!(InputSpec::exact(4, 5, 3).check(&img).is_ok());
        assert!(matches!(InputSpec::exact(4, 5, 1).check(&img), Err(Error::Dimension(_))));
        assert!(InputSpec::exact(5, 5, 3).check(&img).is_err());
        assert_eq!(InputSpec::exact(4, 5, 3).to_string(), "4x5x3");
    }

    fn vec_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..16).prop_flat_map(|d| {
            (
                prop::collection::vec(-10.0..10.0f64, d),
                prop::collection::vec(-10.0..10.0f64, d),
            )
        })
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded((a, b) in vec_strategy()) {
            let (a, b) = (emb(&a), emb(&b));
            prop_assume!(a.norm() > 1e-6 && b.norm() > 1e-6);
            let ab = cosine_similarity(&a, &b).unwrap();
            let ba = cosine_similarity(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!((-1.0..=1.0).contains(&ab));
        }

        #[test]
        fn positive_scale_invariant((a, b) in vec_strategy(), alpha in 1e-3..1e3f64) {
            let (ea, eb) = (emb(&a), emb(&b));
            prop_assume!(ea.norm() > 1e-6 && eb.norm() > 1e-6);
            let scaled = emb(&a.iter().map(|v| v * alpha).collect::<Vec<_>>());
            let d = cosine_similarity(&scaled, &eb).unwrap() - cosine_similarity(&ea, &eb).unwrap();
            prop_assert!(d.abs() <= 1e-9);
        }
    }
}
