//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls the library routine it checks; embedders are treated as
//! given black boxes.

#![allow(dead_code)]

use srise_core::embedding::Embedder;
use srise_core::imaging::{Image, SaliencyMap};

pub fn dot_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

pub fn similarity(e: &dyn Embedder, a: &Image, b: &Image) -> f64 {
    let ea = e.embed(a).unwrap();
    let eb = e.embed(b).unwrap();
    dot_cosine(ea.values(), eb.values())
}

/// Two-pass Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Ranks with ties averaged, computed by counting rather than sorting groups.
fn tied_ranks(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.iter()
        .map(|x| {
            let below = sorted.partition_point(|s| s < x);
            let upto = sorted.partition_point(|s| s <= x);
            (below + upto + 1) as f64 / 2.0
        })
        .collect()
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&tied_ranks(x), &tied_ranks(y))
}

/// Descending order by value, ties kept in index order (stable sort).
pub fn stable_rank(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<(f64, usize)> = values.iter().copied().zip(0..).collect();
    idx.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    idx.into_iter().map(|(_, i)| i).collect()
}

fn channel_means(img: &Image) -> Vec<f64> {
    let c = img.channels();
    let n = (img.height() * img.width()) as f64;
    (0..c)
        .map(|ch| img.data().iter().skip(ch).step_by(c).sum::<f64>() / n)
        .collect()
}

/// Image whose first `k` pixels in `order` come from `src`, the rest from `base`.
fn splice(base: &Image, src: &Image, order: &[usize], k: usize) -> Image {
    let c = base.channels();
    let mut data = base.data().to_vec();
    for &p in &order[..k] {
        data[p * c..(p + 1) * c].copy_from_slice(&src.data()[p * c..(p + 1) * c]);
    }
    Image::new(base.height(), base.width(), c, data).unwrap()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Metric {
    Deletion,
    Insertion,
}

/// Smallest pixel count `k` at which the rebuilt image crosses `threshold`,
/// rebuilding every candidate image from scratch. `None` if no count does.
pub fn exhaustive_metric(
    metric: Metric,
    target: &Image,
    other: &Image,
    map: &SaliencyMap,
    e: &dyn Embedder,
    threshold: f64,
) -> Option<usize> {
    let order = stable_rank(map.values());
    let means = channel_means(target);
    let c = target.channels();
    let filled = Image::new(
        target.height(),
        target.width(),
        c,
        (0..target.data().len()).map(|i| means[i % c]).collect(),
    )
    .unwrap();
    let (base, src) = match metric {
        Metric::Deletion => (target, &filled),
        Metric::Insertion => (&filled, target),
    };
    (0..=order.len()).find(|&k| {
        let s = similarity(e, &splice(base, src, &order, k), other);
        match metric {
            Metric::Deletion => s < threshold,
            Metric::Insertion => s > threshold,
        }
    })
}

/// Similarity drop when each `grid x grid` patch of `a` is zeroed, painted
/// over that patch.
pub fn occlusion_map(a: &Image, b: &Image, e: &dyn Embedder, grid: usize) -> SaliencyMap {
    let (h, w, c) = (a.height(), a.width(), a.channels());
    let base = similarity(e, a, b);
    let patch_of = |y: usize, x: usize| (y * grid / h) * grid + x * grid / w;
    let mut drop = vec![0.0; grid * grid];
    for (p, d) in drop.iter_mut().enumerate() {
        let data = (0..h * w * c)
            .map(|i| {
                let px = i / c;
                if patch_of(px / w, px % w) == p {
                    0.0
                } else {
                    a.data()[i]
                }
            })
            .collect();
        let occluded = Image::new(h, w, c, data).unwrap();
        *d = base - similarity(e, &occluded, b);
    }
    let values = (0..h * w).map(|px| drop[patch_of(px / w, px % w)]).collect();
    SaliencyMap::new(h, w, values).unwrap()
}

/// Number of inversions of `perm` relative to the identity.
pub fn inversions(perm: &[usize]) -> usize {
    let mut n = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                n += 1;
            }
        }
    }
    n
}

/// Pixel-sum brightness of an image.
pub fn brightness(img: &Image) -> f64 {
    img.data().iter().sum()
}
