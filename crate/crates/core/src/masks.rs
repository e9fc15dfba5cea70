//! Random Gaussian-bump perturbation masks.
//!
//! A mask is built by stamping `kernels_per_mask` copies of a fixed `s x s`
//! Gaussian kernel at uniformly drawn centers onto an all-zero grid. Centers are
//! restricted so every kernel lies fully inside the frame, and overlapping
//! kernels are merged with an elementwise maximum (or, optionally, a clipped sum).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeRule {
    /// Elementwise maximum of the stamped kernels.
    Max,
    /// Elementwise sum, clipped to 1.
    SumClip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MaskConfig {
    pub num_masks: usize,
    pub kernels_per_mask: usize,
    /// Side of the square kernel in pixels; must be odd.
    pub kernel_size: usize,
    /// Gaussian standard deviation; `None` means `kernel_size / 4`.
    pub sigma: Option<f64>,
    pub amplitude: f64,
    pub merge: MergeRule,
    pub seed: u64,
}

impl Default for MaskConfig {
    fn default() -> Self {
        MaskConfig {
            num_masks: 1000,
            kernels_per_mask: 3,
            kernel_size: 29,
            sigma: None,
            amplitude: 1.0,
            merge: MergeRule::Max,
            seed: 0,
        }
    }
}

impl MaskConfig {
    pub fn with_masks(mut self, n: usize) -> Self {
        self.num_masks = n;
        self
    }

    pub fn effective_sigma(&self) -> f64 {
        self.sigma.unwrap_or(self.kernel_size as f64 / 4.0)
    }

    /// Checks everything that does not depend on the image size.
    pub fn validate(&self) -> Result<()> {
        if self.num_masks == 0 {
            return Err(Error::Config("num_masks must be at least 1".into()));
        }
        if self.kernels_per_mask == 0 {
            return Err(Error::Config("kernels_per_mask must be at least 1".into()));
        }
        check_kernel_params(self.kernel_size, self.effective_sigma(), self.amplitude)
    }

    pub fn validate_for(&self, height: usize, width: usize) -> Result<()> {
        self.validate()?;
        if self.kernel_size > height.min(width) {
            return Err(Error::Config(format!(
                "kernel size {} does not fit in a {height}x{width} image",
                self.kernel_size
            )));
        }
        Ok(())
    }
}

fn check_kernel_params(size: usize, sigma: f64, amplitude: f64) -> Result<()> {
    if size % 2 == 0 {
        return Err(Error::Config(format!("kernel size must be odd, got {size}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Config(format!("sigma must be positive, got {sigma}")));
    }
    if !(amplitude > 0.0 && amplitude <= 1.0) {
        return Err(Error::Config(format!(
            "amplitude must be in (0, 1], got {amplitude}"
        )));
    }
    Ok(())
}

/// Square patch `amplitude * exp(-(dx^2 + dy^2) / (2 sigma^2))` around its center.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    size: usize,
    values: Vec<f64>,
}

impl GaussianKernel {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn half(&self) -> usize {
        self.size / 2
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.size + col]
    }
}

pub fn gaussian_kernel(size: usize, sigma: f64, amplitude: f64) -> Result<GaussianKernel> {
    check_kernel_params(size, sigma, amplitude)?;
    let half = (size / 2) as f64;
    let denom = 2.0 * sigma * sigma;
    let mut values = Vec::with_capacity(size * size);
    for r in 0..size {
        for c in 0..size {
            let dy = r as f64 - half;
            let dx = c as f64 - half;
            values.push(amplitude * (-(dx * dx + dy * dy) / denom).exp());
        }
    }
    Ok(GaussianKernel { size, values })
}

/// One perturbation pattern with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl Mask {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != height * width {
            return Err(Error::Dimension(format!(
                "{height}x{width} mask needs {} values, got {}",
                height * width,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Input(format!("mask value {v} outside [0, 1]")));
        }
        Ok(Mask {
            height,
            width,
            values,
        })
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Result<Self> {
        Mask::new(height, width, vec![value; height * width])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Kernel center in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub row: usize,
    pub col: usize,
}

/// Mask factory for one image size; caches the kernel.
#[derive(Debug, Clone)]
pub struct MaskSampler {
    height: usize,
    width: usize,
    kernels: usize,
    merge: MergeRule,
    kernel: GaussianKernel,
}

impl MaskSampler {
    pub fn new(height: usize, width: usize, cfg: &MaskConfig) -> Result<Self> {
        cfg.validate_for(height, width)?;
        Ok(MaskSampler {
            height,
            width,
            kernels: cfg.kernels_per_mask,
            merge: cfg.merge,
            kernel: gaussian_kernel(cfg.kernel_size, cfg.effective_sigma(), cfg.amplitude)?,
        })
    }

    pub fn kernel(&self) -> &GaussianKernel {
        &self.kernel
    }

    /// Inclusive range of valid center rows and columns.
    pub fn center_bounds(&self) -> ((usize, usize), (usize, usize)) {
        let half = self.kernel.half();
        (
            (half, self.height - 1 - half),
            (half, self.width - 1 - half),
        )
    }

    /// Draws the kernel centers for one mask: row then column, per kernel.
    pub fn sample_placements(&self, rng: &mut SeededRng) -> Vec<Placement> {
        let ((r0, r1), (c0, c1)) = self.center_bounds();
        (0..self.kernels)
            .map(|_| Placement {
                row: rng.random_range(r0..=r1),
                col: rng.random_range(c0..=c1),
            })
            .collect()
    }

    pub fn render(&self, placements: &[Placement]) -> Mask {
        let mut values = vec![0.0; self.height * self.width];
        let size = self.kernel.size();
        let half = self.kernel.half();
        for p in placements {
            debug_assert!(p.row >= half && p.row + half < self.height);
            debug_assert!(p.col >= half && p.col + half < self.width);
            for kr in 0..size {
                let row = (p.row - half + kr) * self.width + (p.col - half);
                let dst = &mut values[row..row + size];
                let src = &self.kernel.values[kr * size..(kr + 1) * size];
                match self.merge {
                    MergeRule::Max => dst.iter_mut().zip(src).for_each(|(d, s): (&mut f64, &f64)| *d = d.max(*s)),
                    MergeRule::SumClip => dst
                        .iter_mut()
                        .zip(src)
                        .for_each(|(d, s)| *d = (*d + s).min(1.0)),
                }
            }
        }
        Mask {
            height: self.height,
            width: self.width,
            values,
        }
    }

    pub fn sample(&self, rng: &mut SeededRng) -> Mask {
        let placements = self.sample_placements(rng);
        self.render(&placements)
    }
}

pub fn generate_mask(
    height: usize,
    width: usize,
    cfg: &MaskConfig,
    rng: &mut SeededRng,
) -> Result<Mask> {
    Ok(MaskSampler::new(height, width, cfg)?.sample(rng))
}

/// `cfg.num_masks` masks drawn one after another from `rng`.
pub fn generate_mask_batch(
    height: usize,
    width: usize,
    cfg: &MaskConfig,
    rng: &mut SeededRng,
) -> Result<Vec<Mask>> {
    let sampler = MaskSampler::new(height, width, cfg)?;
    Ok((0..cfg.num_masks).map(|_| sampler.sample(rng)).collect())
}
