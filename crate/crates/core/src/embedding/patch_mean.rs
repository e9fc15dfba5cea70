use super::{Embedder, Embedding, InputSpec};
use crate::error::{Error, Result};
use crate::imaging::Image;

/// Splits the image into a `grid x grid` layout of patches and returns the
/// per-patch, per-channel mean intensity in row-major patch order
/// (`D = grid^2 * channels`).
///
/// Row `y` belongs to patch row `y * grid / height` (same for columns), so the
/// patches are equal whenever the grid divides the image size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchMeanEmbedder {
    grid: usize,
}

impl PatchMeanEmbedder {
    pub fn new(grid: usize) -> Result<Self> {
        if grid == 0 {
            return Err(Error::Config("patch grid must be at least 1".into()));
        }
        Ok(PatchMeanEmbedder { grid })
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Patch index of every pixel, row-major.
    pub fn patch_index(&self, height: usize, width: usize) -> Vec<usize> {
        let g = self.grid;
        (0..height)
            .flat_map(|y| (0..width).map(move |x| (y * g / height) * g + x * g / width))
            .collect()
    }
}

impl Embedder for PatchMeanEmbedder {
    fn name(&self) -> String {
        format!("patch-mean:{}", self.grid)
    }

    fn input_spec(&self) -> InputSpec {
        InputSpec::any()
    }

    fn forward(&self, img: &Image) -> Result<Embedding> {
        let (h, w) = img.dims();
        let g = self.grid;
        if h < g || w < g {
            return Err(Error::Dimension(format!(
                "{h}x{w} image is smaller than the {g}x{g} patch grid"
            )));
        }
        let c = img.channels();
        let col_patch: Vec<usize> = (0..w).map(|x| x * g / w).collect();
        let mut sums = vec![0.0; g * g * c];
        let mut counts = vec![0usize; g * g];
        for y in 0..h {
            let prow = (y * g / h) * g;
            let row = &img.data()[y * w * c..(y + 1) * w * c];
            for (px, &pc) in row.chunks_exact(c).zip(&col_patch) {
                let p = prow + pc;
                counts[p] += 1;
                for (s, v) in sums[p * c..(p + 1) * c].iter_mut().zip(px) {
                    *s += v;
                }
            }
        }
        for (p, n) in counts.iter().enumerate() {
            for s in &mut sums[p * c..(p + 1) * c] {
                *s /= *n as f64;
            }
        }
        Embedding::new(sums)
    }
}
