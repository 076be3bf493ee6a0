//! Declarative experiment configuration, read from TOML.
//!
//! ```toml
//! dataset = "../data/iris.csv"   # relative to the config file
//! label_column = "species"       # optional
//! delimiter = ","                # optional, single character
//! k = "auto"                     # integer, or "auto" = number of distinct labels
//! methods = ["km", "rfkm"]
//! restarts = 10
//! base_seed = 42
//! normalize = false
//! workers = 0                    # 0 = one per core
//! record_timing = false          # wall-clock columns in output files
//! lambda1_sweep = [0.5, 1.0, 1.5, 2.0]   # optional
//! output_dir = "results/iris"    # relative to the config file
//!
//! [rfkm]                         # RfkmParams fields; `seed` is set per restart
//! lambda1 = 1.0
//! lambda2 = "auto"
//! phi = 3.0
//!
//! [kmeans]
//! max_iters = 100
//! tol = 1e-6
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::rfkm::RfkmParams;
use crate::rng::RngSeed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Km,
    Rfkm,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Km => "KM",
            Method::Rfkm => "RFKM",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClusterCount {
    /// Number of distinct labels in the dataset.
    #[default]
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for ClusterCount {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(ClusterCount::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) => Err("k must be at least 1".into()),
            Ok(k) => Ok(ClusterCount::Fixed(k)),
            Err(_) => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        }
    }
}

impl Serialize for ClusterCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ClusterCount::Auto => s.serialize_str("auto"),
            ClusterCount::Fixed(k) => s.serialize_u64(*k as u64),
        }
    }
}

impl<'de> Deserialize<'de> for ClusterCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) if v >= 1 => Ok(ClusterCount::Fixed(v as usize)),
            Raw::Int(v) => Err(serde::de::Error::custom(format!("k must be at least 1, got {v}"))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KMeansParams {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for KMeansParams {
    fn default() -> Self {
        Self {
            max_iters: 100,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "dataset")]
    pub dataset_path: PathBuf,
    pub label_column: Option<String>,
    pub delimiter: char,
    pub k: ClusterCount,
    pub methods: Vec<Method>,
    pub restarts: usize,
    pub base_seed: RngSeed,
    pub normalize: bool,
    pub workers: usize,
    pub record_timing: bool,
    pub lambda1_sweep: Option<Vec<f64>>,
    pub output_dir: Option<PathBuf>,
    #[serde(rename = "rfkm")]
    pub params: RfkmParams,
    pub kmeans: KMeansParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset_path: PathBuf::new(),
            label_column: None,
            delimiter: ',',
            k: ClusterCount::Auto,
            methods: vec![Method::Km, Method::Rfkm],
            restarts: 10,
            base_seed: RngSeed(0),
            normalize: false,
            workers: 0,
            record_timing: false,
            lambda1_sweep: None,
            output_dir: None,
            params: RfkmParams::default(),
            kmeans: KMeansParams::default(),
        }
    }
}

impl ExperimentConfig {
    /// Parses and validates TOML text. Relative paths are resolved against
    /// `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let key = offending_key(text, &e);
            Error::Config {
                key,
                message: e.message().to_string(),
            }
        })?;
        if cfg.dataset_path.as_os_str().is_empty() {
            return Err(config_err("dataset", "is required"));
        }
        if cfg.dataset_path.is_relative() {
            cfg.dataset_path = base_dir.join(&cfg.dataset_path);
        }
        if let Some(out) = &cfg.output_dir {
            if out.is_relative() {
                cfg.output_dir = Some(base_dir.join(out));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml_str(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(config_err("restarts", "must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(config_err("methods", "must name at least one method"));
        }
        if self.k == ClusterCount::Auto && self.label_column.is_none() {
            return Err(config_err("k", "`auto` requires label_column"));
        }
        if !self.delimiter.is_ascii() {
            return Err(config_err("delimiter", "must be a single ASCII character"));
        }
        if self.kmeans.max_iters == 0 {
            return Err(config_err("kmeans.max_iters", "must be at least 1"));
        }
        if self.kmeans.tol.is_nan() || self.kmeans.tol < 0.0 {
            return Err(config_err("kmeans.tol", "must be non-negative"));
        }
        if let Some(sweep) = &self.lambda1_sweep {
            if sweep.is_empty() {
                return Err(config_err("lambda1_sweep", "must not be empty"));
            }
            if sweep.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(config_err("lambda1_sweep", "values must be non-negative numbers"));
            }
        }
        self.params.validate().map_err(|e| config_err("rfkm", &e.to_string()))?;
        Ok(())
    }
}

fn config_err(key: &str, message: &str) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.to_string(),
    }
}

/// Best-effort name of the key a TOML error points at.
fn offending_key(text: &str, e: &toml::de::Error) -> String {
    if let Some(quoted) = e.message().split('`').nth(1) {
        if e.message().starts_with("unknown field") {
            return quoted.to_string();
        }
    }
    if let Some(span) = e.span() {
        let start = text[..span.start].rfind('\n').map_or(0, |p| p + 1);
        let end = text[span.start..].find('\n').map_or(text.len(), |p| span.start + p);
        if let Some((key, _)) = text[start..end].split_once('=') {
            return key.trim().to_string();
        }
    }
    "<config>".to_string()
}
