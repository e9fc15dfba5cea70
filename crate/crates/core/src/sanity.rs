//! Model-parameter randomization check and map comparison statistics.
//!
//! A saliency method that depends on the model should produce maps that agree
//! with themselves across mask seeds but not with maps computed from a model
//! with random parameters.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::{Embedder, RandomizedEmbedder};
use crate::error::{Error, Result};
use crate::explainer::{explain_pair, ExplainConfig};
use crate::imaging::{Image, SaliencyMap};
use crate::rng::{seeded, SeededRng};

pub const DEFAULT_MARGIN: f64 = 0.3;

fn check_comparable(a: &SaliencyMap, b: &SaliencyMap) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::Dimension(format!(
            "cannot correlate {}x{} and {}x{} maps",
            a.height(),
            a.width(),
            b.height(),
            b.width()
        )));
    }
    Ok(())
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateMap("correlation of a constant map".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation of the flattened maps.
pub fn map_correlation(a: &SaliencyMap, b: &SaliencyMap) -> Result<f64> {
    check_comparable(a, b)?;
    pearson(a.values(), b.values())
}

/// 1-based ranks, ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation (Pearson of average ranks).
pub fn spearman_correlation(a: &SaliencyMap, b: &SaliencyMap) -> Result<f64> {
    check_comparable(a, b)?;
    pearson(&average_ranks(a.values()), &average_ranks(b.values()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SanityReport {
    /// Trained map vs randomized-model map, same masks.
    pub r_randomized: f64,
    /// Trained map vs trained map under a second mask seed.
    pub r_rerun: f64,
    pub spearman_randomized: f64,
    pub spearman_rerun: f64,
    pub margin: f64,
    pub passed: bool,
    pub mask_seeds: [u64; 2],
    pub trained_embedder: String,
    pub randomized_embedder: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SanityRun {
    pub report: SanityReport,
    pub trained_map: SaliencyMap,
    pub rerun_map: SaliencyMap,
    pub randomized_map: SaliencyMap,
}

fn with_context(what: &str, e: Error) -> Error {
    match e {
        Error::DegenerateMap(msg) => Error::DegenerateMap(format!("{what}: {msg}")),
        other => other,
    }
}

/// Runs the check against an explicit randomized model and mask seeds.
pub fn randomization_check_with(
    a: &Image,
    b: &Image,
    trained: &dyn Embedder,
    randomized: &dyn Embedder,
    cfg: &ExplainConfig,
    margin: f64,
    mask_seeds: [u64; 2],
) -> Result<SanityRun> {
    let trained_map = explain_pair(a, b, trained, cfg, &mut seeded(mask_seeds[0]))?.map_a;
    let rerun_map = explain_pair(a, b, trained, cfg, &mut seeded(mask_seeds[1]))?.map_a;
    let randomized_map = explain_pair(a, b, randomized, cfg, &mut seeded(mask_seeds[0]))?.map_a;

    let rerun_ctx = |e| with_context("trained maps under two mask seeds", e);
    let rand_ctx = |e| with_context("trained vs randomized map", e);
    let r_rerun = map_correlation(&trained_map, &rerun_map).map_err(rerun_ctx)?;
    let r_randomized = map_correlation(&trained_map, &randomized_map).map_err(rand_ctx)?;
    let spearman_rerun = spearman_correlation(&trained_map, &rerun_map).map_err(rerun_ctx)?;
    let spearman_randomized =
        spearman_correlation(&trained_map, &randomized_map).map_err(rand_ctx)?;

    let report = SanityReport {
        r_randomized,
        r_rerun,
        spearman_randomized,
        spearman_rerun,
        margin,
        passed: r_rerun - r_randomized >= margin,
        mask_seeds,
        trained_embedder: trained.name(),
        randomized_embedder: randomized.name(),
    };
    Ok(SanityRun {
        report,
        trained_map,
        rerun_map,
        randomized_map,
    })
}

/// Draws two mask seeds and a randomized model from `rng` and runs the check.
pub fn randomization_check(
    a: &Image,
    b: &Image,
    trained: &dyn Embedder,
    cfg: &ExplainConfig,
    margin: f64,
    rng: &mut SeededRng,
) -> Result<SanityRun> {
    let mask_seeds = [rng.random(), rng.random()];
    let randomized = RandomizedEmbedder::from_rng(
        rng,
        RandomizedEmbedder::DEFAULT_DIM,
        a.height(),
        a.width(),
        a.channels(),
    )?;
    randomization_check_with(a, b, trained, &randomized, cfg, margin, mask_seeds)
}
