//! Multi-restart experiment runner comparing K-Means with RFKM.
//!
//! Every restart `i` uses the seed `base_seed.derive(0, i)` for both
//! methods, so the two methods start from the same random partition and
//! adding or removing a method never changes another method's runs.

mod config;
mod report;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{load_csv, normalize_min_max, Dataset};
use crate::error::{Error, Result};
use crate::kmeans::kmeans_fit;
use crate::metrics::MetricsReport;
use crate::rfkm::{objective, rfkm_fit, ObjectiveBreakdown};
use crate::rng::RngSeed;

pub use config::{ClusterCount, ExperimentConfig, KMeansParams, Method};
pub use report::{
    render_table, write_experiment, write_sweep, Comparison, ExperimentReport, MethodSummary, MetricStats, SweepReport,
};

/// Outcome of one fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub method: Method,
    pub restart: usize,
    pub seed: RngSeed,
    pub metrics: MetricsReport,
    /// RFKM objective of the final clustering under the configured weights,
    /// for both methods.
    pub objective: ObjectiveBreakdown,
    pub iterations: usize,
    /// Seconds.
    pub wall_time: f64,
}

/// Seed of restart `restart`.
pub fn restart_seed(base: RngSeed, restart: usize, _method: Method) -> RngSeed {
    base.derive(0, restart as u64)
}

/// Loads the configured dataset, applying min-max scaling if requested.
pub fn load_dataset(cfg: &ExperimentConfig) -> Result<Dataset> {
    let delimiter = u8::try_from(cfg.delimiter).map_err(|_| Error::Config {
        key: "delimiter".into(),
        message: "must be a single ASCII character".into(),
    })?;
    let d = load_csv(&cfg.dataset_path, cfg.label_column.as_deref(), delimiter)?;
    Ok(if cfg.normalize { normalize_min_max(&d) } else { d })
}

pub fn resolve_k(cfg: &ExperimentConfig, d: &Dataset) -> Result<usize> {
    match cfg.k {
        ClusterCount::Fixed(k) => Ok(k),
        ClusterCount::Auto => d
            .distinct_labels()
            .ok_or_else(|| Error::invalid("k = auto needs a labelled dataset")),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let d = load_dataset(cfg)?;
    run_on_dataset(&d, cfg)
}

pub fn lambda1_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let d = load_dataset(cfg)?;
    sweep_on_dataset(&d, cfg)
}

/// One report per entry of `cfg.lambda1_sweep`, all else fixed.
pub fn sweep_on_dataset(d: &Dataset, cfg: &ExperimentConfig) -> Result<SweepReport> {
    let values = cfg
        .lambda1_sweep
        .as_ref()
        .filter(|v| !v.is_empty())
        .ok_or_else(|| Error::Config {
            key: "lambda1_sweep".into(),
            message: "must list at least one value".into(),
        })?;
    let points = values
        .iter()
        .map(|&lambda1| {
            let mut point_cfg = cfg.clone();
            point_cfg.params.lambda1 = lambda1;
            point_cfg.lambda1_sweep = None;
            run_on_dataset(d, &point_cfg).map(|r| (lambda1, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { points })
}

/// Runs every method × restart on an already loaded dataset.
pub fn run_on_dataset(d: &Dataset, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let k = resolve_k(cfg, d)?;
    let mut methods = cfg.methods.clone();
    methods.sort();
    methods.dedup();

    let jobs: Vec<(Method, usize)> = methods
        .iter()
        .flat_map(|&m| (0..cfg.restarts).map(move |r| (m, r)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    // `collect` keeps job order, so results are sorted by (method, restart).
    let runs: Vec<RunResult> = pool.install(|| {
        jobs.par_iter()
            .map(|&(method, restart)| run_one(d, k, cfg, method, restart))
            .collect::<Result<Vec<_>>>()
    })?;

    ExperimentReport::aggregate(d, k, cfg, runs)
}

fn run_one(d: &Dataset, k: usize, cfg: &ExperimentConfig, method: Method, restart: usize) -> Result<RunResult> {
    let seed = restart_seed(cfg.base_seed, restart, method);
    let params = crate::rfkm::RfkmParams { seed, ..cfg.params };
    let start = Instant::now();
    let (clustering, iterations) = match method {
        Method::Km => {
            let fit = kmeans_fit(d, k, seed, cfg.kmeans.max_iters, cfg.kmeans.tol)?;
            (fit.clustering, fit.iterations)
        }
        Method::Rfkm => {
            let fit = rfkm_fit(d, k, &params)?;
            (fit.clustering, fit.iterations)
        }
    };
    let wall_time = start.elapsed().as_secs_f64();
    let metrics = MetricsReport::evaluate(d, &clustering)?;
    let objective = objective(d, &clustering, &params)?;
    Ok(RunResult {
        method,
        restart,
        seed,
        metrics,
        objective,
        iterations,
        wall_time,
    })
}
