use std::path::Path;
use std::process::ExitCode;

use anyhow::Result;
use log::info;
use serde::Serialize;
use srise_core::explainer::{explain_pair, explain_triplet, ExplainConfig, PairSummary, Triplet};
use srise_core::imaging::hstack;
use srise_core::rng::seeded;

use super::{build_embedder, display_paths, load_inputs, out_dir};
use crate::config::RunConfig;

#[derive(Serialize)]
struct PairRecord<'a> {
    embedder: String,
    seed: u64,
    inputs: Vec<String>,
    config: &'a ExplainConfig,
    #[serde(flatten)]
    explanation: PairSummary,
}

pub fn pair(first: &Path, second: &Path, cfg: &RunConfig) -> Result<ExitCode> {
    let paths = [first, second];
    let images = load_inputs(&paths, cfg)?;
    let (a, b) = (&images[0], &images[1]);
    let e = build_embedder(cfg, a)?;
    let ex = explain_pair(a, b, e.as_ref(), &cfg.explain, &mut seeded(cfg.seed))?;
    info!("base similarity {:.6}", ex.base_similarity);

    let out = out_dir(cfg)?;
    out.map("map_a", &ex.map_a)?;
    out.map("map_b", &ex.map_b)?;
    out.overlay("overlay_a.png", a, &ex.map_a, cfg.overlay_alpha)?;
    out.overlay("overlay_b.png", b, &ex.map_b, cfg.overlay_alpha)?;
    out.json(
        "explanation.json",
        &PairRecord {
            embedder: e.name(),
            seed: cfg.seed,
            inputs: display_paths(&paths),
            config: &cfg.explain,
            explanation: ex.summary(),
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TripletRecord<'a> {
    embedder: String,
    seed: u64,
    inputs: Vec<String>,
    config: &'a ExplainConfig,
    weight_match: f64,
    weight_nonmatch: f64,
    matching: PairSummary,
    nonmatching: PairSummary,
    warnings: Vec<String>,
}

pub fn triplet(paths: [&Path; 3], cfg: &RunConfig) -> Result<ExitCode> {
    let mut images = load_inputs(&paths, cfg)?.into_iter();
    let (probe, mate, nonmate) = (
        images.next().expect("three inputs"),
        images.next().expect("three inputs"),
        images.next().expect("three inputs"),
    );
    let t = Triplet::new(probe, mate, nonmate)?;
    let e = build_embedder(cfg, &t.probe)?;
    let ex = explain_triplet(&t, e.as_ref(), &cfg.explain, &mut seeded(cfg.seed))?;
    info!(
        "match similarity {:.6}, non-match similarity {:.6}, weights {:.4} / {:.4}",
        ex.matching.base_similarity,
        ex.nonmatching.base_similarity,
        ex.weight_match,
        ex.weight_nonmatch
    );

    let out = out_dir(cfg)?;
    let maps = [
        ("probe_match", &ex.matching.map_a, &t.probe),
        ("mate", &ex.matching.map_b, &t.mate),
        ("probe_nonmatch", &ex.nonmatching.map_a, &t.probe),
        ("nonmate", &ex.nonmatching.map_b, &t.nonmate),
    ];
    let weighted = ex.weighted_maps();
    let mut overlays = Vec::with_capacity(4);
    for ((stem, map, img), w) in maps.into_iter().zip(&weighted) {
        out.map(&format!("map_{stem}"), map)?;
        overlays.push(out.overlay(&format!("overlay_{stem}.png"), img, w, cfg.overlay_alpha)?);
    }
    out.png("triplet_strip.png", &hstack(&overlays)?)?;
    let summary = ex.summary();
    out.json(
        "triplet.json",
        &TripletRecord {
            embedder: e.name(),
            seed: cfg.seed,
            inputs: display_paths(&paths),
            config: &cfg.explain,
            weight_match: summary.weight_match,
            weight_nonmatch: summary.weight_nonmatch,
            matching: summary.matching,
            nonmatching: summary.nonmatching,
            warnings: summary.warnings,
        },
    )?;
    Ok(ExitCode::SUCCESS)
}
