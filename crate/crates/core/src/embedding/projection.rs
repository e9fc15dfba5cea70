use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use super::{Embedder, Embedding, InputSpec};
use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::rng::{seeded, SeededRng};

/// `tanh(P x)` with `P` a seeded `dim x (h*w*c)` matrix of unit-normal entries
/// and `x` the flattened image.
#[derive(Debug, Clone)]
pub struct RandomProjectionEmbedder {
    dim: usize,
    seed: u64,
    spec: InputSpec,
    /// `P` transposed: the `dim` weights of input `j` are contiguous.
    weights: Arc<Vec<f64>>,
}

impl RandomProjectionEmbedder {
    pub fn new(dim: usize, seed: u64, height: usize, width: usize, channels: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("projection dimension must be at least 1".into()));
        }
        if height == 0 || width == 0 || (channels != 1 && channels != 3) {
            return Err(Error::Config(format!(
                "invalid projection input shape {height}x{width}x{channels}"
            )));
        }
        let inputs = height * width * channels;
        let mut rng = seeded(seed);
        let mut weights = vec![0.0; inputs * dim];
        // Rows of P are drawn in order; storage is transposed.
        for row in 0..dim {
            for j in 0..inputs {
                weights[j * dim + row] = rng.sample(StandardNormal);
            }
        }
        Ok(RandomProjectionEmbedder {
            dim,
            seed,
            spec: InputSpec::exact(height, width, channels),
            weights: Arc::new(weights),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl Embedder for RandomProjectionEmbedder {
    fn name(&self) -> String {
        format!("random-projection:{}:{}", self.dim, self.seed)
    }

    fn input_spec(&self) -> InputSpec {
        self.spec
    }

    fn forward(&self, img: &Image) -> Result<Embedding> {
        let d = self.dim;
        let mut acc = vec![0.0; d];
        // Masked images are mostly zero; skipping zeros is exact.
        for (j, &v) in img.data().iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for (a, w) in acc.iter_mut().zip(&self.weights[j * d..(j + 1) * d]) {
                *a += v * w;
            }
        }
        Embedding::new(acc.into_iter().map(f64::tanh).collect())
    }
}

/// Stand-in for a network with irrelevant parameters: a random projection
/// whose seed is drawn fresh at construction.
#[derive(Debug, Clone)]
pub struct RandomizedEmbedder(RandomProjectionEmbedder);

impl RandomizedEmbedder {
    pub const DEFAULT_DIM: usize = 128;

    /// Draws the projection seed from `rng`.
    pub fn from_rng(
        rng: &mut SeededRng,
        dim: usize,
        height: usize,
        width: usize,
        channels: usize,
    ) -> Result<Self> {
        Self::with_seed(rng.random(), dim, height, width, channels)
    }

    /// Draws the projection seed from the operating system.
    pub fn fresh(dim: usize, height: usize, width: usize, channels: usize) -> Result<Self> {
        Self::with_seed(rand::random(), dim, height, width, channels)
    }

    pub fn with_seed(
        seed: u64,
        dim: usize,
        height: usize,
        width: usize,
        channels: usize,
    ) -> Result<Self> {
        RandomProjectionEmbedder::new(dim, seed, height, width, channels).map(RandomizedEmbedder)
    }

    pub fn seed(&self) -> u64 {
        self.0.seed()
    }
}

impl Embedder for RandomizedEmbedder {
    fn name(&self) -> String {
        format!("randomized:{}:{}", self.0.dim(), self.0.seed())
    }

    fn input_spec(&self) -> InputSpec {
        self.0.input_spec()
    }

    fn forward(&self, img: &Image) -> Result<Embedding> {
        self.0.forward(img)
    }
}
