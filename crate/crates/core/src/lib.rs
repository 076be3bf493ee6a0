//! Representativity-fair clustering.
//!
//! The crate provides RFKM, a K-Means variant whose objective adds a squared
//! loss term and a smoothed maximum-loss term to the usual sum of squared
//! distances, together with a Lloyd K-Means baseline, the fairness and
//! quality measures used to compare them, and a multi-restart experiment
//! harness.

pub mod clustering;
pub mod dataset;
pub mod distance;
pub mod error;
pub mod format;
pub mod harness;
pub mod kmeans;
pub mod metrics;
pub mod rfkm;
pub mod rng;
pub mod synthetic;
pub mod toy;

pub use clustering::Clustering;
pub use dataset::{detect_label_column, load_csv, normalize_min_max, Dataset};
pub use distance::{euclidean_distance, squared_distance};
pub use error::{Error, Result};
pub use kmeans::{init_random, kmeans_fit, kmeans_objective, KMeansFit};
pub use metrics::{MetricsReport, RepresentativityVector, VarianceMode};
pub use rfkm::{rfkm_fit, Lambda2, ObjectiveBreakdown, RfkmFit, RfkmParams};
pub use rng::RngSeed;
