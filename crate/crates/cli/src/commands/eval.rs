use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use log::info;
use serde::Serialize;
use srise_core::evaluation::{evaluate_dataset, DatasetReport, MetricConfig};
use srise_core::explainer::{explain_pair, Triplet};
use srise_core::imaging::{Image, SaliencyMap};
use srise_core::rng::substream;

use super::{build_embedder, load_inputs, out_dir, triplet_dirs};
use crate::config::RunConfig;

#[derive(Serialize)]
struct EvalRow {
    iterations: usize,
    report: DatasetReport,
}

#[derive(Serialize)]
struct EvalRecord<'a> {
    embedder: String,
    seed: u64,
    triplets: Vec<String>,
    metric: &'a MetricConfig,
    rows: Vec<EvalRow>,
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        builder = builder.num_threads(workers);
    }
    builder.build().context("cannot start worker pool")
}

/// Runs S-RISE on the matching pair of every triplet for each mask count and
/// scores both maps (probe against mate, mate against probe).
pub fn dataset(dir: &Path, cfg: &RunConfig) -> Result<ExitCode> {
    let dirs = triplet_dirs(dir)?;
    let mut triplets = Vec::with_capacity(dirs.len());
    for d in &dirs {
        let (p, m, n) = (d.join("probe.png"), d.join("mate.png"), d.join("nonmate.png"));
        let mut images = load_inputs(&[&p, &m, &n], cfg)?.into_iter();
        let (probe, mate, nonmate) = (
            images.next().expect("three inputs"),
            images.next().expect("three inputs"),
            images.next().expect("three inputs"),
        );
        let t = Triplet::new(probe, mate, nonmate)
            .with_context(|| format!("triplet {}", d.display()))?;
        triplets.push(t);
    }
    if let Some(bad) = triplets.iter().position(|t| !t.probe.same_shape(&triplets[0].probe)) {
        anyhow::bail!(
            "triplet {} differs in size from {}; set image_size to resize all inputs",
            dirs[bad].display(),
            dirs[0].display()
        );
    }
    let e = build_embedder(cfg, &triplets[0].probe)?;
    let workers = pool(cfg.explain.workers)?;

    let mut rows = Vec::with_capacity(cfg.iterations.len());
    let mut table = String::from("method,iterations,deletion,insertion,average\n");
    for &n in &cfg.iterations {
        let explain_cfg = cfg.explain.clone().with_masks(n);
        let mut entries: Vec<(Image, Image, SaliencyMap)> = Vec::with_capacity(2 * triplets.len());
        for (i, t) in triplets.iter().enumerate() {
            let mut rng = substream(cfg.seed, i as u64);
            let ex = explain_pair(&t.probe, &t.mate, e.as_ref(), &explain_cfg, &mut rng)?;
            entries.push((t.probe.clone(), t.mate.clone(), ex.map_a));
            entries.push((t.mate.clone(), t.probe.clone(), ex.map_b));
        }
        let report = workers.install(|| evaluate_dataset(&entries, e.as_ref(), &cfg.metric))?;
        info!(
            "N = {n}: deletion {:.4}, insertion {:.4}, average {:.4}",
            report.mean_deletion, report.mean_insertion, report.average
        );
        let _ = writeln!(
            table,
            "S-RISE,{n},{},{},{}",
            report.mean_deletion, report.mean_insertion, report.average
        );
        rows.push(EvalRow {
            iterations: n,
            report,
        });
    }

    let out = out_dir(cfg)?;
    out.text("eval_table.csv", &table)?;
    for row in &rows {
        out.text(&format!("eval_pairs_{}.csv", row.iterations), &row.report.to_csv())?;
    }
    out.json(
        "eval.json",
        &EvalRecord {
            embedder: e.name(),
            seed: cfg.seed,
            triplets: dirs
                .iter()
                .map(|d| d.file_name().unwrap_or_default().to_string_lossy().into_owned())
                .collect(),
            metric: &cfg.metric,
            rows,
        },
    )?;
    Ok(ExitCode::SUCCESS)
}
