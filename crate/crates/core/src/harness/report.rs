use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, Method, RunResult};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::format::sig6;
use crate::rfkm::RfkmParams;
use crate::rng::RngSeed;

/// Mean and sample standard deviation over restarts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStats {
    pub mean: f64,
    pub std: f64,
}

impl MetricStats {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }

    fn of_optional(values: impl Iterator<Item = Option<f64>>) -> Option<Self> {
        values.collect::<Option<Vec<f64>>>().map(|v| Self::of(&v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub runs: usize,
    pub var_population: MetricStats,
    pub var_sample: Option<MetricStats>,
    pub jain: MetricStats,
    pub max: MetricStats,
    pub avg: MetricStats,
    pub silhouette: Option<MetricStats>,
    pub purity: Option<MetricStats>,
    pub objective_total: MetricStats,
    pub iterations: MetricStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<MetricStats>,
}

impl MethodSummary {
    fn of(method: Method, runs: &[&RunResult], timing: bool) -> Self {
        let stats = |f: fn(&RunResult) -> f64| MetricStats::of(&runs.iter().map(|r| f(r)).collect::<Vec<_>>());
        Self {
            method,
            runs: runs.len(),
            var_population: stats(|r| r.metrics.var_population),
            var_sample: MetricStats::of_optional(runs.iter().map(|r| r.metrics.var_sample)),
            jain: stats(|r| r.metrics.jain),
            max: stats(|r| r.metrics.max),
            avg: stats(|r| r.metrics.avg),
            silhouette: MetricStats::of_optional(runs.iter().map(|r| r.metrics.silhouette)),
            purity: MetricStats::of_optional(runs.iter().map(|r| r.metrics.purity)),
            objective_total: stats(|r| r.objective.total),
            iterations: stats(|r| r.iterations as f64),
            wall_time: timing.then(|| stats(|r| r.wall_time)),
        }
    }

    /// `(name, lower_is_better, mean)` for every comparable measure.
    fn measures(&self) -> Vec<(&'static str, bool, Option<f64>)> {
        vec![
            ("var_population", true, Some(self.var_population.mean)),
            ("var_sample", true, self.var_sample.map(|s| s.mean)),
            ("jain", false, Some(self.jain.mean)),
            ("max", true, Some(self.max.mean)),
            ("avg", true, Some(self.avg.mean)),
            ("silhouette", false, self.silhouette.map(|s| s.mean)),
            ("purity", false, self.purity.map(|s| s.mean)),
        ]
    }
}

/// RFKM against the K-Means baseline on one measure. A positive
/// `improvement_pct` means RFKM is better.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub metric: String,
    pub lower_is_better: bool,
    pub km: f64,
    pub rfkm: f64,
    pub improvement_pct: Option<f64>,
}

impl Comparison {
    pub fn improvement(km: f64, rfkm: f64, lower_is_better: bool) -> Option<f64> {
        if km == 0.0 {
            return None;
        }
        let gain = if lower_is_better { km - rfkm } else { rfkm - km };
        Some(100.0 * gain / km.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub dataset: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub restarts: usize,
    pub base_seed: RngSeed,
    pub normalized: bool,
    pub params: RfkmParams,
    pub methods: Vec<MethodSummary>,
    /// Empty unless both methods ran.
    pub comparison: Vec<Comparison>,
    #[serde(skip)]
    pub runs: Vec<RunResult>,
    #[serde(skip)]
    pub record_timing: bool,
}

impl ExperimentReport {
    pub(super) fn aggregate(d: &Dataset, k: usize, cfg: &ExperimentConfig, runs: Vec<RunResult>) -> Result<Self> {
        let mut methods: Vec<Method> = runs.iter().map(|r| r.method).collect();
        methods.dedup();
        let summaries: Vec<MethodSummary> = methods
            .iter()
            .map(|&m| {
                let of_method: Vec<&RunResult> = runs.iter().filter(|r| r.method == m).collect();
                MethodSummary::of(m, &of_method, cfg.record_timing)
            })
            .collect();

        let find = |m: Method| summaries.iter().find(|s| s.method == m);
        let comparison = match (find(Method::Km), find(Method::Rfkm)) {
            (Some(km), Some(rf)) => km
                .measures()
                .into_iter()
                .zip(rf.measures())
                .filter_map(|((name, lower, a), (_, _, b))| {
                    let (a, b) = (a?, b?);
                    Some(Comparison {
                        metric: name.to_string(),
                        lower_is_better: lower,
                        km: a,
                        rfkm: b,
                        improvement_pct: Comparison::improvement(a, b, lower),
                    })
                })
                .collect(),
            _ => Vec::new(),
        };

        let mut params = cfg.params;
        params.seed = cfg.base_seed;
        Ok(Self {
            dataset: cfg.dataset_path.display().to_string(),
            n: d.n(),
            m: d.m(),
            k,
            restarts: cfg.restarts,
            base_seed: cfg.base_seed,
            normalized: cfg.normalize,
            params,
            methods: summaries,
            comparison,
            runs,
            record_timing: cfg.record_timing,
        })
    }

    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|s| s.method == method)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per run; floats with six significant digits.
    pub fn runs_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(sig6).unwrap_or_default();
        let mut out = String::from(
            "method,restart,seed,avg,var_population,var_sample,jain,max,silhouette,purity,objective_total,term1,term2,term3,iterations",
        );
        if self.record_timing {
            out.push_str(",wall_time_s");
        }
        out.push('\n');
        for r in &self.runs {
            let m = &r.metrics;
            let _ = write!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.method,
                r.restart,
                r.seed.0,
                sig6(m.avg),
                sig6(m.var_population),
                opt(m.var_sample),
                sig6(m.jain),
                sig6(m.max),
                opt(m.silhouette),
                opt(m.purity),
                sig6(r.objective.total),
                sig6(r.objective.term1),
                sig6(r.objective.term2),
                sig6(r.objective.term3),
                r.iterations,
            );
            if self.record_timing {
                let _ = write!(out, ",{}", sig6(r.wall_time));
            }
            out.push('\n');
        }
        out
    }
}

/// Side-by-side fairness (Var, Jain, Max) and quality (Avg, Sil, Pur) means
/// per method, followed by the RFKM-vs-KM percentage row.
pub fn render_table(report: &ExperimentReport) -> String {
    let cols = ["Var(pop)", "Var(smp)", "Jain", "Max", "Avg", "Sil", "Pur"];
    let mut out = String::new();
    let _ = writeln!(
        out,
        "dataset {} (n={}, m={}, k={}, restarts={}, lambda1={}, lambda2={}, phi={})",
        report.dataset,
        report.n,
        report.m,
        report.k,
        report.restarts,
        sig6(report.params.lambda1),
        report.params.lambda2,
        sig6(report.params.phi),
    );
    let _ = write!(out, "{:<12}", "method");
    for c in cols {
        let _ = write!(out, "{c:>12}");
    }
    out.push('\n');
    let cell = |v: Option<f64>| v.map(sig6).unwrap_or_else(|| "-".into());
    for s in &report.methods {
        let _ = write!(out, "{:<12}", s.method.label());
        for (_, _, v) in s.measures() {
            let _ = write!(out, "{:>12}", cell(v));
        }
        out.push('\n');
    }
    if !report.comparison.is_empty() {
        let _ = write!(out, "{:<12}", "RFKM vs KM");
        let names = [
            "var_population",
            "var_sample",
            "jain",
            "max",
            "avg",
            "silhouette",
            "purity",
        ];
        for name in names {
            let v = report
                .comparison
                .iter()
                .find(|c| c.metric == name)
                .and_then(|c| c.improvement_pct)
                .map(|p| format!("{}%", sig6(p)));
            let _ = write!(out, "{:>12}", v.unwrap_or_else(|| "-".into()));
        }
        out.push('\n');
        out.push_str("(positive percentages: RFKM better)\n");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub points: Vec<(f64, ExperimentReport)>,
}

impl SweepReport {
    /// Long format: `lambda1,method,metric,mean,std`.
    pub fn long_csv(&self) -> String {
        let mut out = String::from("lambda1,method,metric,mean,std\n");
        for (lambda1, report) in &self.points {
            for s in &report.methods {
                let rows = [
                    ("var_population", Some(s.var_population)),
                    ("var_sample", s.var_sample),
                    ("jain", Some(s.jain)),
                    ("max", Some(s.max)),
                    ("avg", Some(s.avg)),
                    ("silhouette", s.silhouette),
                    ("purity", s.purity),
                    ("objective_total", Some(s.objective_total)),
                ];
                for (name, stats) in rows {
                    if let Some(st) = stats {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{}",
                            sig6(*lambda1),
                            s.method,
                            name,
                            sig6(st.mean),
                            sig6(st.std)
                        );
                    }
                }
            }
        }
        out
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Writes `report.json` and `runs.csv` into `dir`.
pub fn write_experiment(report: &ExperimentReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    write_file(dir, "report.json", &report.to_json())?;
    write_file(dir, "runs.csv", &report.runs_csv())
}

/// Writes `sweep.json`, `sweep.csv` and per-value `report_lambda1_<v>.json`
/// / `runs_lambda1_<v>.csv` into `dir`.
pub fn write_sweep(sweep: &SweepReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    write_file(
        dir,
        "sweep.json",
        &serde_json::to_string_pretty(sweep).expect("sweep serializes"),
    )?;
    write_file(dir, "sweep.csv", &sweep.long_csv())?;
    for (lambda1, report) in &sweep.points {
        let tag = sig6(*lambda1);
        write_file(dir, &format!("report_lambda1_{tag}.json"), &report.to_json())?;
        write_file(dir, &format!("runs_lambda1_{tag}.csv"), &report.runs_csv())?;
    }
    Ok(())
}
