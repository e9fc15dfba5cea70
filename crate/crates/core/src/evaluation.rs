//! Deletion and insertion faithfulness metrics.
//!
//! Deletion replaces the most salient pixels of the target with the target's
//! mean color until the pair similarity drops below a threshold. Insertion
//! starts from the mean-filled target and restores pixels until the similarity
//! rises above it. Both report the fraction of pixels touched; lower is better.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{cosine_similarity, Concurrency, Embedder, Embedding};
use crate::error::{Error, Result};
use crate::imaging::{mean_fill, Image, SaliencyMap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricConfig {
    pub threshold: f64,
    /// Pixels changed between two similarity evaluations.
    pub step: usize,
    pub max_fraction: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            threshold: 0.3,
            step: 1,
            max_fraction: 1.0,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > -1.0 && self.threshold < 1.0) {
            return Err(Error::Config(format!(
                "threshold must lie in (-1, 1), got {}",
                self.threshold
            )));
        }
        if self.step == 0 {
            return Err(Error::Config("step must be at least 1".into()));
        }
        if !(self.max_fraction > 0.0 && self.max_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "max_fraction must lie in (0, 1], got {}",
                self.max_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub pixels: usize,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub fraction: f64,
    pub crossed: bool,
    pub pixels_changed: usize,
    /// Similarity after every round; the first point is the unmodified start.
    pub curve: Vec<CurvePoint>,
}

/// Pixel indices by descending saliency, ties in row-major order.
pub fn pixel_rank(map: &SaliencyMap) -> Vec<usize> {
    let v = map.values();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
    order
}

#[derive(Clone, Copy)]
enum Direction {
    Deletion,
    Insertion,
}

fn check_inputs(target: &Image, other: &Image, map: &SaliencyMap) -> Result<()> {
    if map.dims() != target.dims() {
        return Err(Error::Dimension(format!(
            "{}x{} map for a {}x{} image",
            map.height(),
            map.width(),
            target.height(),
            target.width()
        )));
    }
    if other.dims() != target.dims() {
        return Err(Error::Dimension(format!(
            "pair images differ in size: {}x{} vs {}x{}",
            target.height(),
            target.width(),
            other.height(),
            other.width()
        )));
    }
    Ok(())
}

fn run_metric(
    direction: Direction,
    target: &Image,
    other: &Image,
    map: &SaliencyMap,
    e: &dyn Embedder,
    cfg: &MetricConfig,
) -> Result<MetricResult> {
    cfg.validate()?;
    check_inputs(target, other, map)?;
    let filled = mean_fill(target);
    let (mut current, source) = match direction {
        Direction::Deletion => (target.clone(), &filled),
        Direction::Insertion => (filled.clone(), target),
    };
    let reference: Embedding = e.embed(other)?;
    let similarity = |img: &Image| cosine_similarity(&e.embed(img)?, &reference);
    let crossed = |s: f64| match direction {
        Direction::Deletion => s < cfg.threshold,
        Direction::Insertion => s > cfg.threshold,
    };

    let total = target.pixel_count();
    let limit = ((cfg.max_fraction * total as f64).round() as usize).clamp(1, total);
    let order = pixel_rank(map);

    let start = similarity(&current)?;
    let mut curve = vec![CurvePoint {
        pixels: 0,
        similarity: start,
    }];
    if crossed(start) {
        return Ok(MetricResult {
            fraction: 0.0,
            crossed: true,
            pixels_changed: 0,
            curve,
        });
    }
    let mut changed = 0;
    while changed < limit {
        let next = (changed + cfg.step).min(limit);
        for &p in &order[changed..next] {
            current.set_pixel(p, source.pixel(p));
        }
        changed = next;
        let s = similarity(&current)?;
        curve.push(CurvePoint {
            pixels: changed,
            similarity: s,
        });
        if crossed(s) {
            return Ok(MetricResult {
                fraction: changed as f64 / total as f64,
                crossed: true,
                pixels_changed: changed,
                curve,
            });
        }
    }
    Ok(MetricResult {
        fraction: cfg.max_fraction,
        crossed: false,
        pixels_changed: changed,
        curve,
    })
}

/// Deletion metric of `map` (which explains `target`) against the pristine `other`.
pub fn deletion(
    target: &Image,
    other: &Image,
    map: &SaliencyMap,
    e: &dyn Embedder,
    cfg: &MetricConfig,
) -> Result<MetricResult> {
    run_metric(Direction::Deletion, target, other, map, e, cfg)
}

pub fn insertion(
    target: &Image,
    other: &Image,
    map: &SaliencyMap,
    e: &dyn Embedder,
    cfg: &MetricConfig,
) -> Result<MetricResult> {
    run_metric(Direction::Insertion, target, other, map, e, cfg)
}

/// I.i.d. uniform `[0, 1)` values; the baseline map.
pub fn random_saliency<R: Rng + ?Sized>(h: usize, w: usize, rng: &mut R) -> SaliencyMap {
    let values = (0..h * w).map(|_| rng.random::<f64>()).collect();
    SaliencyMap::from_raw_unchecked(h, w, values)
}

/// One evaluated `(target, other, map)` entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMetrics {
    pub deletion: f64,
    pub insertion: f64,
    pub deletion_crossed: bool,
    pub insertion_crossed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetReport {
    pub pairs: Vec<PairMetrics>,
    pub mean_deletion: f64,
    pub mean_insertion: f64,
    /// Mean of the two means.
    pub average: f64,
}

impl DatasetReport {
    pub fn from_pairs(pairs: Vec<PairMetrics>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Input("cannot summarize an empty dataset".into()));
        }
        let n = pairs.len() as f64;
        let mean_deletion = pairs.iter().map(|p| p.deletion).sum::<f64>() / n;
        let mean_insertion = pairs.iter().map(|p| p.insertion).sum::<f64>() / n;
        Ok(DatasetReport {
            pairs,
            mean_deletion,
            mean_insertion,
            average: (mean_deletion + mean_insertion) / 2.0,
        })
    }

    /// Per-pair rows followed by a `mean` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pair,deletion,insertion,average\n");
        for (i, p) in self.pairs.iter().enumerate() {
            let _ = writeln!(
                out,
                "{i},{},{},{}",
                p.deletion,
                p.insertion,
                (p.deletion + p.insertion) / 2.0
            );
        }
        let _ = writeln!(
            out,
            "mean,{},{},{}",
            self.mean_deletion, self.mean_insertion, self.average
        );
        out
    }
}

/// Deletion and insertion for every `(target, other, map)` entry.
///
/// Entries are evaluated concurrently on the current rayon pool unless the
/// embedder is serial; results keep input order.
pub fn evaluate_dataset(
    pairs: &[(Image, Image, SaliencyMap)],
    e: &dyn Embedder,
    cfg: &MetricConfig,
) -> Result<DatasetReport> {
    if pairs.is_empty() {
        return Err(Error::Input("evaluation needs at least one pair".into()));
    }
    let eval = |(target, other, map): &(Image, Image, SaliencyMap)| -> Result<PairMetrics> {
        let d = deletion(target, other, map, e, cfg)?;
        let i = insertion(target, other, map, e, cfg)?;
        Ok(PairMetrics {
            deletion: d.fraction,
            insertion: i.fraction,
            deletion_crossed: d.crossed,
            insertion_crossed: i.crossed,
        })
    };
    let rows: Result<Vec<PairMetrics>> = match e.concurrency() {
        Concurrency::Parallel => pairs.par_iter().map(eval).collect(),
        Concurrency::Serial => pairs.iter().map(eval).collect(),
    };
    DatasetReport::from_pairs(rows?)
}
