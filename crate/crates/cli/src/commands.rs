use std::path::Path;

use rfkm_core::format::{round_sig6, sig6};
use rfkm_core::harness::{
    lambda1_sweep, render_table, resolve_k, run_experiment, write_experiment, write_sweep, ExperimentConfig,
};
use rfkm_core::toy::{analyze_case1, analyze_case2, ToyAnalysis};
use rfkm_core::{
    detect_label_column, kmeans_fit, load_csv, normalize_min_max, rfkm_fit, Clustering, Dataset, Error, MetricsReport,
    RfkmParams, RngSeed,
};

use crate::{BenchArgs, EvalArgs, FitArgs, InputArgs, MethodArg, ToyArgs};

/// A failed command: message for standard error and the exit status.
pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl Failure {
    fn runtime(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 1,
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } => Failure::usage(e.to_string()),
            _ => Failure::runtime(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn delimiter_byte(c: char) -> Result<u8, Failure> {
    u8::try_from(c)
        .ok()
        .filter(u8::is_ascii)
        .ok_or_else(|| Failure::usage(format!("delimiter must be a single ASCII character, got {c:?}")))
}

fn load_input(args: &InputArgs) -> Result<Dataset, Failure> {
    let delimiter = delimiter_byte(args.delimiter)?;
    let label = match &args.label_column {
        Some(name) => Some(name.clone()),
        None => detect_label_column(&args.input, delimiter)?,
    };
    let d = load_csv(&args.input, label.as_deref(), delimiter)?;
    Ok(if args.normalize { normalize_min_max(&d) } else { d })
}

fn rounded(m: &MetricsReport) -> MetricsReport {
    let opt = |v: Option<f64>| v.map(round_sig6);
    MetricsReport {
        avg: round_sig6(m.avg),
        var_population: round_sig6(m.var_population),
        var_sample: opt(m.var_sample),
        jain: round_sig6(m.jain),
        max: round_sig6(m.max),
        silhouette: opt(m.silhouette),
        purity: opt(m.purity),
    }
}

fn write(path: &Path, contents: &str) -> Outcome {
    std::fs::write(path, contents).map_err(|e| Failure::runtime(format!("writing {}: {e}", path.display())))
}

pub fn fit(args: &FitArgs) -> Outcome {
    let d = load_input(&args.input)?;
    let cfg = ExperimentConfig {
        k: args.k,
        ..ExperimentConfig::default()
    };
    let k = resolve_k(&cfg, &d)?;
    let seed = RngSeed(args.seed);
    let clustering = match args.method {
        MethodArg::Km => kmeans_fit(&d, k, seed, args.max_iters, cfg.kmeans.tol)?.clustering,
        MethodArg::Rfkm => {
            let params = RfkmParams {
                lambda1: args.lambda1,
                lambda2: args.lambda2,
                phi: args.phi,
                max_outer_iters: args.max_iters,
                seed,
                ..RfkmParams::default()
            };
            params.validate().map_err(|e| Failure::usage(e.to_string()))?;
            rfkm_fit(&d, k, &params)?.clustering
        }
    };
    write(&args.out, &clustering.to_json())?;
    println!("{}", rounded(&MetricsReport::evaluate(&d, &clustering)?).to_json());
    Ok(())
}

pub fn eval(args: &EvalArgs) -> Outcome {
    let d = load_input(&args.input)?;
    let text = std::fs::read_to_string(&args.clustering)
        .map_err(|e| Failure::runtime(format!("reading {}: {e}", args.clustering.display())))?;
    let clustering = Clustering::from_json(&text)?;
    println!("{}", rounded(&MetricsReport::evaluate(&d, &clustering)?).to_json());
    Ok(())
}

pub fn bench(args: &BenchArgs) -> Outcome {
    let cfg = ExperimentConfig::from_file(&args.config)?;
    let out_dir = args
        .out_dir
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| args.config.parent().unwrap_or_else(|| Path::new(".")).join("results"));
    if cfg.lambda1_sweep.is_some() {
        let sweep = lambda1_sweep(&cfg)?;
        write_sweep(&sweep, &out_dir)?;
        for (lambda1, report) in &sweep.points {
            println!("lambda1 = {}", sig6(*lambda1));
            print!("{}", render_table(report));
            println!();
        }
    } else {
        let report = run_experiment(&cfg)?;
        write_experiment(&report, &out_dir)?;
        print!("{}", render_table(&report));
    }
    println!("reports written to {}", out_dir.display());
    Ok(())
}

pub fn toy(args: &ToyArgs) -> Outcome {
    let analysis = match args.case {
        1 => analyze_case1()?,
        _ => analyze_case2()?,
    };
    print!("{}", render_toy(&analysis));
    if analysis.all_hold() {
        Ok(())
    } else {
        Err(Failure::runtime("a directional check failed"))
    }
}

fn render_toy(a: &ToyAnalysis) -> String {
    let [l, r] = a.names;
    let [ml, mr] = &a.metrics;
    let cell = |v: Option<f64>| v.map(sig6).unwrap_or_else(|| "-".into());
    let mut out = format!("{:<10}{:>12}{:>12}\n", "measure", l, r);
    let rows = [
        ("Avg", Some(ml.avg), Some(mr.avg)),
        ("Max", Some(ml.max), Some(mr.max)),
        ("Var(smp)", ml.var_sample, mr.var_sample),
        ("Var(pop)", Some(ml.var_population), Some(mr.var_population)),
        ("Jain", Some(ml.jain), Some(mr.jain)),
    ];
    for (name, a, b) in rows {
        out.push_str(&format!("{:<10}{:>12}{:>12}\n", name, cell(a), cell(b)));
    }
    if let Some([ol, or]) = &a.objectives {
        out.push_str(&format!(
            "{:<10}{:>12}{:>12}\n",
            "Objective",
            sig6(ol.total),
            sig6(or.total)
        ));
        out.push_str(&format!("objective ratio {l}/{r}: {}\n", sig6(ol.total / or.total)));
    }
    for c in &a.checks {
        out.push_str(&format!("[{}] {}\n", if c.holds { "PASS" } else { "FAIL" }, c.claim));
    }
    out
}
