use std::path::Path;
use std::process::ExitCode;

use anyhow::Result;
use log::{info, warn};
use rand::Rng;
use srise_core::embedding::{Embedder, RandomizedEmbedder};
use srise_core::imaging::{hstack, render_overlay};
use srise_core::rng::seeded;
use srise_core::sanity::randomization_check_with;

use super::{build_embedder, load_inputs, out_dir};
use crate::config::RunConfig;

/// Exit 0 when the check passes, 1 when it fails.
pub fn pair(first: &Path, second: &Path, cfg: &RunConfig, control: bool) -> Result<ExitCode> {
    let images = load_inputs(&[first, second], cfg)?;
    let (a, b) = (&images[0], &images[1]);
    let mut rng = seeded(cfg.seed);
    let mask_seeds = [rng.random(), rng.random()];
    let randomized = RandomizedEmbedder::from_rng(
        &mut rng,
        cfg.randomized_dim,
        a.height(),
        a.width(),
        a.channels(),
    )?;
    let trained: Box<dyn Embedder> = if control {
        info!("control run: randomized model in both roles");
        Box::new(randomized.clone())
    } else {
        build_embedder(cfg, a)?
    };
    let run = randomization_check_with(
        a,
        b,
        trained.as_ref(),
        &randomized,
        &cfg.explain,
        cfg.margin,
        mask_seeds,
    )?;
    let r = &run.report;
    info!(
        "r_rerun {:.4}, r_randomized {:.4}, margin {}",
        r.r_rerun, r.r_randomized, r.margin
    );

    let out = out_dir(cfg)?;
    out.map("map_trained", &run.trained_map)?;
    out.map("map_rerun", &run.rerun_map)?;
    out.map("map_randomized", &run.randomized_map)?;
    let alpha = cfg.overlay_alpha;
    let strip = hstack(&[
        render_overlay(a, &run.trained_map.scaled(0.0), 0.0)?,
        render_overlay(a, &run.trained_map, alpha)?,
        render_overlay(a, &run.rerun_map, alpha)?,
        render_overlay(a, &run.randomized_map, alpha)?,
    ])?;
    out.png("sanity_strip.png", &strip)?;
    out.json("sanity.json", r)?;

    if r.passed {
        info!("sanity check passed");
        Ok(ExitCode::SUCCESS)
    } else {
        warn!("sanity check failed: maps do not depend on the model");
        Ok(ExitCode::from(1))
    }
}
