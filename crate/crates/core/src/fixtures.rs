//! Synthetic face-like fixtures.
//!
//! A fixture identity is five colored features placed in distinct cells of a
//! 4x4 grid. Each feature is rendered as a Gaussian blob multiplied by a
//! one-pixel checkerboard, so two renders with opposite checkerboard parity
//! share every patch-level statistic while touching disjoint pixels.

use std::fs;
use std::path::Path;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::explainer::Triplet;
use crate::imaging::{save_png, Image};
use crate::rng::{substream, SeededRng};

pub const FIXTURE_SIZE: usize = 112;
const GRID: usize = 4;
const FEATURES: usize = 5;

#[derive(Debug, Clone, PartialEq)]
struct Feature {
    row: f64,
    col: f64,
    radius: f64,
    color: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Identity {
    size: usize,
    cells: Vec<usize>,
    features: Vec<Feature>,
}

impl Identity {
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }
}

fn check_size(size: usize) -> Result<()> {
    if size < 2 * GRID {
        return Err(Error::Config(format!(
            "fixture size must be at least {}, got {size}",
            2 * GRID
        )));
    }
    Ok(())
}

fn identity_in_cells(size: usize, cells: Vec<usize>, rng: &mut SeededRng) -> Identity {
    let scale = size as f64 / FIXTURE_SIZE as f64;
    let cell = size as f64 / GRID as f64;
    let jitter = (6.0 * scale).round() as i64;
    let features = cells
        .iter()
        .map(|&c| {
            let (r, k) = (c / GRID, c % GRID);
            let row = (r as f64 + 0.5) * cell + rng.random_range(-jitter..=jitter) as f64;
            let col = (k as f64 + 0.5) * cell + rng.random_range(-jitter..=jitter) as f64;
            let color = [
                rng.random_range(0.4..1.0),
                rng.random_range(0.4..1.0),
                rng.random_range(0.4..1.0),
            ];
            let radius = rng.random_range(6.0..11.0) * scale;
            Feature {
                row,
                col,
                radius,
                color,
            }
        })
        .collect();
    Identity {
        size,
        cells,
        features,
    }
}

pub fn random_identity(size: usize, rng: &mut SeededRng) -> Result<Identity> {
    check_size(size)?;
    let cells = sample(rng, GRID * GRID, FEATURES).into_vec();
    Ok(identity_in_cells(size, cells, rng))
}

/// Renders `id` with checkerboard `parity` and up to one pixel of feature jitter.
pub fn render_identity(id: &Identity, parity: usize, rng: &mut SeededRng) -> Image {
    let n = id.size;
    let mut data = vec![0.0; n * n * 3];
    for f in &id.features {
        let cy = f.row + rng.random_range(-1i64..=1) as f64;
        let cx = f.col + rng.random_range(-1i64..=1) as f64;
        let denom = 2.0 * f.radius * f.radius;
        for y in 0..n {
            for x in 0..n {
                if (x + y + parity) % 2 == 0 {
                    continue;
                }
                let d2 = (y as f64 - cy).powi(2) + (x as f64 - cx).powi(2);
                let w = (-d2 / denom).exp();
                let px = &mut data[(y * n + x) * 3..(y * n + x) * 3 + 3];
                for (v, c) in px.iter_mut().zip(f.color) {
                    *v += w * c;
                }
            }
        }
    }
    for v in &mut data {
        *v = v.clamp(0.0, 1.0);
    }
    Image::new(n, n, 3, data).expect("rendered values are clamped")
}

/// Probe and mate share an identity with opposite parity; the nonmate is a
/// second identity.
pub fn face_triplet(size: usize, rng: &mut SeededRng) -> Result<Triplet> {
    let id = random_identity(size, rng)?;
    let other = random_identity(size, rng)?;
    triplet_from(&id, &other, rng)
}

/// Like [`face_triplet`], but the nonmate's features avoid every probe cell,
/// which keeps the non-matching similarity well below the matching one.
pub fn disjoint_triplet(size: usize, rng: &mut SeededRng) -> Result<Triplet> {
    let id = random_identity(size, rng)?;
    let free: Vec<usize> = (0..GRID * GRID).filter(|c| !id.cells.contains(c)).collect();
    let cells = sample(rng, free.len(), FEATURES)
        .into_iter()
        .map(|i| free[i])
        .collect();
    let other = identity_in_cells(size, cells, rng);
    triplet_from(&id, &other, rng)
}

fn triplet_from(id: &Identity, other: &Identity, rng: &mut SeededRng) -> Result<Triplet> {
    let probe = render_identity(id, 0, rng);
    let mate = render_identity(id, 1, rng);
    let parity = rng.random_range(0..2);
    let nonmate = render_identity(other, parity, rng);
    Triplet::new(probe, mate, nonmate)
}

/// `count` face triplets, triplet `i` drawn from substream `i` of `seed`.
pub fn fixture_suite(count: usize, size: usize, seed: u64) -> Result<Vec<Triplet>> {
    (0..count)
        .map(|i| face_triplet(size, &mut substream(seed, i as u64)))
        .collect()
}

/// Two images whose left halves show the same 4x4 block color pattern and
/// whose right halves are independent: random block colors times per-pixel
/// brightness in `[0.5, 1]`.
pub fn half_shared_pair(size: usize, rng: &mut SeededRng) -> Result<(Image, Image)> {
    check_size(size)?;
    let block = |rng: &mut SeededRng, lo: f64| -> Vec<[f64; 3]> {
        (0..GRID * GRID)
            .map(|_| {
                [
                    rng.random_range(lo..1.0),
                    rng.random_range(lo..1.0),
                    rng.random_range(lo..1.0),
                ]
            })
            .collect()
    };
    let shared = block(rng, 0.3);
    let render = |rng: &mut SeededRng| {
        let right = block(rng, 0.0);
        let mut data = Vec::with_capacity(size * size * 3);
        for y in 0..size {
            for x in 0..size {
                let cell = (y * GRID / size) * GRID + x * GRID / size;
                if x < size / 2 {
                    data.extend_from_slice(&shared[cell]);
                } else {
                    let b: f64 = rng.random_range(0.5..1.0);
                    data.extend(right[cell].iter().map(|c| c * b));
                }
            }
        }
        Image::new(size, size, 3, data)
    };
    let a = render(rng)?;
    let b = render(rng)?;
    Ok((a, b))
}

/// Writes `triplet_NN/{probe,mate,nonmate}.png` under `dir`.
pub fn write_dataset(dir: &Path, triplets: &[Triplet]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, t) in triplets.iter().enumerate() {
        let sub = dir.join(format!("triplet_{i:02}"));
        fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
        save_png(&t.probe, sub.join("probe.png"))?;
        save_png(&t.mate, sub.join("mate.png"))?;
        save_png(&t.nonmate, sub.join("nonmate.png"))?;
    }
    Ok(())
}
