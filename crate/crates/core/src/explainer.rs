//! Similarity-weighted randomized input sampling (S-RISE).
//!
//! For a pair `(a, b)` a batch of masks `M_1..M_N` is drawn once. Each mask is
//! applied to `a` (resp. `b`) while the other image stays intact, and the cosine
//! similarity of the two embeddings becomes the weight of that mask. The
//! saliency of a pixel is the weighted mask mass it receives.
//!
//! Scores are computed concurrently, but masks are drawn from the generator and
//! accumulated strictly in index order, so the result does not depend on the
//! worker count.

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{cosine_similarity, Concurrency, Embedder, Embedding};
use crate::error::{Error, Result};
use crate::imaging::{Image, SaliencyMap};
use crate::masks::{Mask, MaskConfig, MaskSampler};
use crate::rng::SeededRng;

const CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReweightMode {
    /// Match map at full weight, non-match map scaled by the ratio of the
    /// clamped base similarities.
    Ratio,
    None,
}

/// How per-mask scores become a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// `sum_i s_i M_i(p) / sum_i M_i(p)`: the mean score of the masks that
    /// reveal pixel `p`, weighted by how much they reveal it. Pixels no mask
    /// touches get 0.
    Coverage,
    /// `sum_i s_i M_i(p)`.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripletMasks {
    /// A new batch for the non-matching pair.
    Fresh,
    /// Both pairs reuse one batch.
    Shared,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExplainConfig {
    pub masks: MaskConfig,
    /// Per-map min-max normalization.
    pub normalize: bool,
    pub reweight: ReweightMode,
    pub weighting: Weighting,
    pub triplet_masks: TripletMasks,
    /// Concurrent forward passes; 0 uses every available core. Not
    /// serialized, since it never changes the result.
    #[serde(skip_serializing)]
    pub workers: usize,
}

impl Default for ExplainConfig {
    fn default() -> Self {
        ExplainConfig {
            masks: MaskConfig::default(),
            normalize: true,
            reweight: ReweightMode::Ratio,
            weighting: Weighting::Coverage,
            triplet_masks: TripletMasks::Fresh,
            workers: 1,
        }
    }
}

impl ExplainConfig {
    pub fn with_masks(mut self, n: usize) -> Self {
        self.masks.num_masks = n;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// Masks whose masked image could not be scored (degenerate embedding).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub degenerate_a: usize,
    pub degenerate_b: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairExplanation {
    pub map_a: SaliencyMap,
    pub map_b: SaliencyMap,
    pub base_similarity: f64,
    pub scores_a: Vec<f64>,
    pub scores_b: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// The JSON-facing part of a [`PairExplanation`] (maps are exported separately).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub base_similarity: f64,
    pub num_masks: usize,
    pub scores_a: Vec<f64>,
    pub scores_b: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl PairExplanation {
    pub fn summary(&self) -> PairSummary {
        PairSummary {
            base_similarity: self.base_similarity,
            num_masks: self.scores_a.len(),
            scores_a: self.scores_a.clone(),
            scores_b: self.scores_b.clone(),
            diagnostics: self.diagnostics.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triplet {
    pub probe: Image,
    pub mate: Image,
    pub nonmate: Image,
}

impl Triplet {
    pub fn new(probe: Image, mate: Image, nonmate: Image) -> Result<Self> {
        for (name, img) in [("mate", &mate), ("nonmate", &nonmate)] {
            if !img.same_shape(&probe) {
                return Err(Error::Dimension(format!(
                    "{name} is {}x{}x{}, probe is {}x{}x{}",
                    img.height(),
                    img.width(),
                    img.channels(),
                    probe.height(),
                    probe.width(),
                    probe.channels()
                )));
            }
        }
        Ok(Triplet {
            probe,
            mate,
            nonmate,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripletExplanation {
    /// `{probe, mate}`: `map_a` explains the probe, `map_b` the mate.
    pub matching: PairExplanation,
    /// `{probe, nonmate}`.
    pub nonmatching: PairExplanation,
    pub weight_match: f64,
    pub weight_nonmatch: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripletSummary {
    pub matching: PairSummary,
    pub nonmatching: PairSummary,
    pub weight_match: f64,
    pub weight_nonmatch: f64,
    pub warnings: Vec<String>,
}

impl TripletExplanation {
    /// Maps scaled by their pair weight: probe (match), mate, probe (non-match), nonmate.
    pub fn weighted_maps(&self) -> [SaliencyMap; 4] {
        [
            self.matching.map_a.scaled(self.weight_match),
            self.matching.map_b.scaled(self.weight_match),
            self.nonmatching.map_a.scaled(self.weight_nonmatch),
            self.nonmatching.map_b.scaled(self.weight_nonmatch),
        ]
    }

    pub fn summary(&self) -> TripletSummary {
        TripletSummary {
            matching: self.matching.summary(),
            nonmatching: self.nonmatching.summary(),
            weight_match: self.weight_match,
            weight_nonmatch: self.weight_nonmatch,
            warnings: self.warnings.clone(),
        }
    }
}

/// `img * mask` per pixel, the mask broadcast over channels.
pub fn apply_mask(img: &Image, mask: &Mask) -> Result<Image> {
    if img.dims() != mask.dims() {
        return Err(Error::Dimension(format!(
            "{}x{} mask on {}x{} image",
            mask.height(),
            mask.width(),
            img.height(),
            img.width()
        )));
    }
    let c = img.channels();
    let data = img
        .data()
        .chunks_exact(c)
        .zip(mask.values())
        .flat_map(|(px, m)| px.iter().map(move |v| v * m))
        .collect();
    Ok(Image::from_raw_unchecked(img.height(), img.width(), c, data))
}

/// Min-max rescale to `[0, 1]`; a constant map becomes all zeros.
pub fn normalize_map(map: &SaliencyMap) -> SaliencyMap {
    let (lo, hi) = (map.min(), map.max());
    let span = hi - lo;
    let values = if span > 0.0 {
        map.values()
            .iter()
            .map(|v| ((v - lo) / span).clamp(0.0, 1.0))
            .collect()
    } else {
        vec![0.0; map.values().len()]
    };
    SaliencyMap::from_raw_unchecked(map.height(), map.width(), values)
}

/// Similarity of a masked image against an intact reference; `None` when the
/// masked image's embedding is degenerate.
fn masked_score(e: &dyn Embedder, masked: &Image, reference: &Embedding) -> Result<Option<f64>> {
    let emb = e.embed(masked)?;
    match cosine_similarity(&emb, reference) {
        Ok(s) => Ok(Some(s)),
        Err(Error::DegenerateEmbedding { .. }) if emb.norm() < crate::embedding::MIN_NORM => {
            Ok(None)
        }
        Err(err) => Err(err),
    }
}

struct Accumulator {
    weighted_a: Vec<f64>,
    weighted_b: Vec<f64>,
    coverage: Vec<f64>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator {
            weighted_a: vec![0.0; n],
            weighted_b: vec![0.0; n],
            coverage: vec![0.0; n],
        }
    }

    fn add(&mut self, mask: &Mask, sa: f64, sb: f64) {
        for (i, &m) in mask.values().iter().enumerate() {
            if m != 0.0 {
                self.weighted_a[i] += sa * m;
                self.weighted_b[i] += sb * m;
                self.coverage[i] += m;
            }
        }
    }

    fn finish(&self, weighted: &[f64], weighting: Weighting) -> Vec<f64> {
        match weighting {
            Weighting::Raw => weighted.to_vec(),
            Weighting::Coverage => weighted
                .iter()
                .zip(&self.coverage)
                .map(|(w, c)| if *c > 0.0 { w / c } else { 0.0 })
                .collect(),
        }
    }
}

fn thread_pool(workers: usize) -> Result<Option<rayon::ThreadPool>> {
    let n = if workers == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        workers
    };
    if n <= 1 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))
}

pub fn explain_pair(
    a: &Image,
    b: &Image,
    e: &dyn Embedder,
    cfg: &ExplainConfig,
    rng: &mut SeededRng,
) -> Result<PairExplanation> {
    if a.dims() != b.dims() {
        return Err(Error::Dimension(format!(
            "pair images differ in size: {}x{} vs {}x{}",
            a.height(),
            a.width(),
            b.height(),
            b.width()
        )));
    }
    let (h, w) = a.dims();
    let sampler = MaskSampler::new(h, w, &cfg.masks)?;
    let emb_a = e.embed(a)?;
    let emb_b = e.embed(b)?;
    let base_similarity = cosine_similarity(&emb_a, &emb_b)?;

    let pool = match e.concurrency() {
        Concurrency::Parallel => thread_pool(cfg.workers)?,
        Concurrency::Serial => None,
    };

    let n = cfg.masks.num_masks;
    let mut acc = Accumulator::new(h * w);
    let mut scores_a = Vec::with_capacity(n);
    let mut scores_b = Vec::with_capacity(n);
    let mut diagnostics = Diagnostics::default();

    let score_mask = |mask: &Mask| -> Result<(Option<f64>, Option<f64>)> {
        let sa = masked_score(e, &apply_mask(a, mask)?, &emb_b)?;
        let sb = masked_score(e, &apply_mask(b, mask)?, &emb_a)?;
        Ok((sa, sb))
    };

    let mut done = 0;
    while done < n {
        let len = CHUNK.min(n - done);
        let masks: Vec<Mask> = (0..len).map(|_| sampler.sample(rng)).collect();
        let scored: Vec<Result<(Option<f64>, Option<f64>)>> = match &pool {
            Some(pool) => pool.install(|| masks.par_iter().map(score_mask).collect()),
            None => masks.iter().map(score_mask).collect(),
        };
        for (mask, result) in masks.iter().zip(scored) {
            let (sa, sb) = result?;
            if sa.is_none() {
                diagnostics.degenerate_a += 1;
            }
            if sb.is_none() {
                diagnostics.degenerate_b += 1;
            }
            let (sa, sb) = (sa.unwrap_or(0.0), sb.unwrap_or(0.0));
            acc.add(mask, sa, sb);
            scores_a.push(sa);
            scores_b.push(sb);
        }
        done += len;
    }
    if diagnostics != Diagnostics::default() {
        debug!(
            "{} / {} masked embeddings were degenerate and scored 0",
            diagnostics.degenerate_a + diagnostics.degenerate_b,
            2 * n
        );
    }

    let finish = |weighted: &[f64]| {
        let map = SaliencyMap::from_raw_unchecked(h, w, acc.finish(weighted, cfg.weighting));
        if cfg.normalize {
            normalize_map(&map)
        } else {
            map
        }
    };
    Ok(PairExplanation {
        map_a: finish(&acc.weighted_a),
        map_b: finish(&acc.weighted_b),
        base_similarity,
        scores_a,
        scores_b,
        diagnostics,
    })
}

/// Pair weights `(match, non-match)` under the ratio rule, and whether the
/// matching similarity was non-positive.
pub fn ratio_weights(match_similarity: f64, nonmatch_similarity: f64) -> (f64, f64, bool) {
    let sm = match_similarity.max(0.0);
    let sn = nonmatch_similarity.max(0.0);
    if sm == 0.0 {
        return (1.0, 1.0, true);
    }
    (1.0, (sn / sm).clamp(0.0, 1.0), false)
}

pub fn explain_triplet(
    t: &Triplet,
    e: &dyn Embedder,
    cfg: &ExplainConfig,
    rng: &mut SeededRng,
) -> Result<TripletExplanation> {
    let shared_start = rng.clone();
    let matching = explain_pair(&t.probe, &t.mate, e, cfg, rng)?;
    let nonmatching = match cfg.triplet_masks {
        TripletMasks::Fresh => explain_pair(&t.probe, &t.nonmate, e, cfg, rng)?,
        TripletMasks::Shared => {
            let mut replay = shared_start;
            explain_pair(&t.probe, &t.nonmate, e, cfg, &mut replay)?
        }
    };
    let mut warnings = Vec::new();
    let (weight_match, weight_nonmatch) = match cfg.reweight {
        ReweightMode::None => (1.0, 1.0),
        ReweightMode::Ratio => {
            let (wm, wn, degenerate) =
                ratio_weights(matching.base_similarity, nonmatching.base_similarity);
            if degenerate {
                let msg = format!(
                    "matching similarity {} is not positive; both pair weights set to 1",
                    matching.base_similarity
                );
                warn!("{msg}");
                warnings.push(msg);
            }
            (wm, wn)
        }
    };
    Ok(TripletExplanation {
        matching,
        nonmatching,
        weight_match,
        weight_nonmatch,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{InputSpec, PatchMeanEmbedder};
    use crate::masks::generate_mask_batch;
    use crate::rng::seeded;
    use rand::Rng;

    fn random_image(h: usize, w: usize, c: usize, seed: u64) -> Image {
        let mut rng = seeded(seed);
        Image::from_fn(h, w, c, |_, _, _| rng.random()).unwrap()
    }

    fn small_cfg(n: usize) -> ExplainConfig {
        ExplainConfig {
            masks: MaskConfig {
                num_masks: n,
                kernel_size: 7,
                ..MaskConfig::default()
            },
            ..ExplainConfig::default()
        }
    }

    #[test]
    fn apply_mask_identities() {
        let img = random_image(5, 6, 3, 1);
        assert_eq!(apply_mask(&img, &Mask::filled(5, 6, 1.0).unwrap()).unwrap(), img);
        let zero = apply_mask(&img, &Mask::filled(5, 6, 0.0).unwrap()).unwrap();
        assert!(zero.data().iter().all(|&v| v == 0.0));
        assert!(apply_mask(&img, &Mask::filled(6, 5, 1.0).unwrap()).is_err());
    }

    #[test]
    fn apply_mask_matches_double_loop() {
        let img = random_image(31, 23, 3, 2);
        let mut rng = seeded(3);
        let mask = Mask::new(31, 23, (0..31 * 23).map(|_| rng.random()).collect()).unwrap();
        let out = apply_mask(&img, &mask).unwrap();
        for y in 0..31 {
            for x in 0..23 {
                for c in 0..3 {
                    let want = img.get(y, x, c) * mask.get(y, x);
                    assert!((out.get(y, x, c) - want).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn normalize_cases() {
        let m = SaliencyMap::new(1, 3, vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(normalize_map(&m).values(), &[0.0, 0.5, 1.0]);
        let c = SaliencyMap::new(2, 2, vec![3.5; 4]).unwrap();
        assert_eq!(normalize_map(&c).values(), &[0.0; 4]);
        let unit = SaliencyMap::new(1, 4, vec![0.0, 0.3, 1.0, 0.7]).unwrap();
        let again = normalize_map(&unit);
        for (a, b) in again.values().iter().zip(unit.values()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn single_positive_mask_raw_map_is_normalized_mask() {
        let a = random_image(20, 20, 3, 4);
        let b = random_image(20, 20, 3, 5);
        let cfg = ExplainConfig {
            weighting: Weighting::Raw,
            ..small_cfg(1)
        };
        let e = PatchMeanEmbedder::new(2).unwrap();
        let ex = explain_pair(&a, &b, &e, &cfg, &mut seeded(6)).unwrap();
        assert!(ex.scores_a[0] > 0.0);
        let mask = &generate_mask_batch(20, 20, &cfg.masks, &mut seeded(6)).unwrap()[0];
        let expect = normalize_map(&SaliencyMap::new(20, 20, mask.values().to_vec()).unwrap());
        for (got, want) in ex.map_a.values().iter().zip(expect.values()) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn single_mask_coverage_map_is_support_indicator() {
        let a = random_image(20, 20, 3, 4);
        let b = random_image(20, 20, 3, 5);
        let cfg = small_cfg(1);
        let e = PatchMeanEmbedder::new(2).unwrap();
        let ex = explain_pair(&a, &b, &e, &cfg, &mut seeded(6)).unwrap();
        let mask = &generate_mask_batch(20, 20, &cfg.masks, &mut seeded(6)).unwrap()[0];
        for (v, m) in ex.map_a.values().iter().zip(mask.values()) {
            let want = if *m > 0.0 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn self_pair_has_unit_similarity() {
        let a = random_image(24, 24, 3, 7);
        let e = PatchMeanEmbedder::new(4).unwrap();
        let ex = explain_pair(&a, &a, &e, &small_cfg(8), &mut seeded(1)).unwrap();
        assert!((ex.base_similarity - 1.0).abs() < 1e-12);
        assert_eq!(ex.scores_a.len(), 8);
        assert_eq!(ex.scores_b.len(), 8);
    }

    #[test]
    fn uncovered_pixels_sit_at_the_minimum() {
        let a = random_image(40, 40, 3, 8);
        let b = random_image(40, 40, 3, 9);
        let cfg = small_cfg(3);
        let e = PatchMeanEmbedder::new(2).unwrap();
        let ex = explain_pair(&a, &b, &e, &cfg, &mut seeded(2)).unwrap();
        let masks = generate_mask_batch(40, 40, &cfg.masks, &mut seeded(2)).unwrap();
        let mut uncovered = 0;
        for p in 0..1600 {
            if masks.iter().all(|m| m.values()[p] == 0.0) {
                uncovered += 1;
                assert_eq!(ex.map_a.values()[p], 0.0);
                assert_eq!(ex.map_b.values()[p], 0.0);
            }
        }
        assert!(uncovered > 0);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let a = random_image(32, 32, 3, 10);
        let b = random_image(32, 32, 3, 11);
        let e = PatchMeanEmbedder::new(4).unwrap();
        let one = explain_pair(&a, &b, &e, &small_cfg(100), &mut seeded(3)).unwrap();
        let four =
            explain_pair(&a, &b, &e, &small_cfg(100).with_workers(4), &mut seeded(3)).unwrap();
        assert_eq!(one, four);
    }

    struct ZeroMean;

    impl Embedder for ZeroMean {
        fn name(&self) -> String {
            "zero-mean".into()
        }
        fn input_spec(&self) -> InputSpec {
            InputSpec::any()
        }
        fn forward(&self, img: &Image) -> Result<Embedding> {
            // Sum of the image plus a constant direction; all-zero input is degenerate.
            let s: f64 = img.data().iter().sum();
            Embedding::new(vec![s, s * 0.5])
        }
        fn concurrency(&self) -> Concurrency {
            Concurrency::Serial
        }
    }

    #[test]
    fn degenerate_masked_embeddings_are_counted() {
        // Image is non-zero only in the top-left corner, which small kernels
        // in a large frame rarely reach.
        let a = Image::from_fn(40, 40, 1, |y, x, _| if y < 2 && x < 2 { 1.0 } else { 0.0 })
            .unwrap();
        let ex = explain_pair(&a, &a, &ZeroMean, &small_cfg(20), &mut seeded(4)).unwrap();
        assert!(ex.diagnostics.degenerate_a > 0);
        assert_eq!(ex.diagnostics.degenerate_a, ex.diagnostics.degenerate_b);
        let zeros = ex.scores_a.iter().filter(|s| **s == 0.0).count();
        assert_eq!(zeros, ex.diagnostics.degenerate_a);
    }

    #[test]
    fn ratio_rule() {
        assert_eq!(ratio_weights(0.9, 0.9), (1.0, 1.0, false));
        let (wm, wn, _) = ratio_weights(0.9, 0.3);
        assert_eq!(wm, 1.0);
        assert!((wn - 1.0 / 3.0).abs() < 1e-9);
        assert_eq!(ratio_weights(0.5, -0.2), (1.0, 0.0, false));
        assert_eq!(ratio_weights(0.3, 0.6), (1.0, 1.0, false));
        assert_eq!(ratio_weights(-0.1, 0.4), (1.0, 1.0, true));
        assert_eq!(ratio_weights(0.0, 0.0), (1.0, 1.0, true));
    }

    #[test]
    fn identical_mate_and_nonmate_get_equal_weights() {
        let p = random_image(24, 24, 3, 12);
        let m = random_image(24, 24, 3, 13);
        let t = Triplet::new(p, m.clone(), m).unwrap();
        let e = PatchMeanEmbedder::new(4).unwrap();
        let ex = explain_triplet(&t, &e, &small_cfg(4), &mut seeded(5)).unwrap();
        assert_eq!(ex.weight_match, 1.0);
        assert_eq!(ex.weight_nonmatch, 1.0);
        // Fresh batches: the two pairs saw different masks.
        assert_ne!(ex.matching.map_a, ex.nonmatching.map_a);
    }

    #[test]
    fn shared_masks_replay_the_batch() {
        let p = random_image(24, 24, 3, 12);
        let m = random_image(24, 24, 3, 13);
        let t = Triplet::new(p, m.clone(), m).unwrap();
        let e = PatchMeanEmbedder::new(4).unwrap();
        let cfg = ExplainConfig {
            triplet_masks: TripletMasks::Shared,
            ..small_cfg(6)
        };
        let ex = explain_triplet(&t, &e, &cfg, &mut seeded(5)).unwrap();
        assert_eq!(ex.matching, ex.nonmatching);
    }

    #[test]
    fn triplet_shape_checked() {
        let p = random_image(8, 8, 3, 1);
        let bad = random_image(8, 9, 3, 1);
        assert!(Triplet::new(p.clone(), p.clone(), bad).is_err());
        assert!(Triplet::new(p.clone(), random_image(8, 8, 1, 1), p).is_err());
    }

    #[test]
    fn degenerate_triplet_warns() {
        // Embedding whose second image points the opposite way.
        struct Signed;
        impl Embedder for Signed {
            fn name(&self) -> String {
                "signed".into()
            }
            fn input_spec(&self) -> InputSpec {
                InputSpec::any()
            }
            fn forward(&self, img: &Image) -> Result<Embedding> {
                let first = img.data()[0];
                let s: f64 = img.data().iter().sum::<f64>() + 1.0;
                Embedding::new(vec![if first > 0.5 { s } else { -s }])
            }
        }
        let p = Image::filled(8, 8, 1, 1.0).unwrap();
        let m = Image::filled(8, 8, 1, 0.0).unwrap();
        let t = Triplet::new(p, m.clone(), m).unwrap();
        let cfg = ExplainConfig {
            masks: MaskConfig {
                num_masks: 2,
                kernel_size: 3,
                ..MaskConfig::default()
            },
            ..ExplainConfig::default()
        };
        let ex = explain_triplet(&t, &Signed, &cfg, &mut seeded(1)).unwrap();
        assert!(ex.matching.base_similarity < 0.0);
        assert_eq!((ex.weight_match, ex.weight_nonmatch), (1.0, 1.0));
        assert_eq!(ex.warnings.len(), 1);
    }
}
