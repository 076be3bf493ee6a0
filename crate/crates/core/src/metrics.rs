//! Representativity fairness and clustering quality measures.
//!
//! The representativity vector holds, per object, the Euclidean distance to
//! the representative of its cluster. Fairness is read off that vector
//! (variance, Jain index, maximum); quality is measured by its mean, the
//! silhouette score and, when class labels exist, purity.

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::dataset::Dataset;
use crate::distance::squared_distance_unchecked;
use crate::error::{Error, Result};

/// Euclidean distance of each object to its assigned representative.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentativityVector(Vec<f64>);

impl RepresentativityVector {
    /// Wraps precomputed values. They must be non-empty, finite and non-negative.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("representativity vector is empty"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid(
                "representativity values must be finite and non-negative",
            ));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceMode {
    /// Divide by `n`.
    Population,
    /// Divide by `n − 1`.
    Sample,
}

pub fn representativity(d: &Dataset, c: &Clustering) -> Result<RepresentativityVector> {
    c.check_consistent(d)?;
    let values = d
        .rows()
        .zip(c.assignment())
        .map(|(x, &k)| squared_distance_unchecked(x, c.representative(k)).sqrt())
        .collect();
    Ok(RepresentativityVector(values))
}

pub fn avg(r: &RepresentativityVector) -> f64 {
    r.0.iter().sum::<f64>() / r.len() as f64
}

pub fn variance(r: &RepresentativityVector, mode: VarianceMode) -> Result<f64> {
    let n = r.len();
    let divisor = match mode {
        VarianceMode::Population => n as f64,
        VarianceMode::Sample => {
            if n < 2 {
                return Err(Error::invalid("sample variance needs at least two values"));
            }
            (n - 1) as f64
        }
    };
    let mean = avg(r);
    let ss: f64 = r.0.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok(ss / divisor)
}

/// Jain's index `(Σ r)² / (n · Σ r²)`.
///
/// An all-zero vector is perfectly uniform and scores 1.
pub fn jain(r: &RepresentativityVector) -> f64 {
    // Scaling by the maximum leaves the ratio unchanged and keeps the squares
    // in range.
    let scale = max_representativity_loss(r);
    if scale == 0.0 {
        return 1.0;
    }
    let (sum, sum_sq) = r.0.iter().fold((0.0, 0.0), |(s, q), v| {
        let v = v / scale;
        (s + v, q + v * v)
    });
    (sum * sum / (r.len() as f64 * sum_sq)).min(1.0)
}

pub fn max_representativity_loss(r: &RepresentativityVector) -> f64 {
    r.0.iter().copied().fold(0.0, f64::max)
}

/// Mean silhouette over all objects, on Euclidean distance. Objects in
/// singleton clusters score 0.
pub fn silhouette(d: &Dataset, c: &Clustering) -> Result<f64> {
    c.check_consistent(d)?;
    let k = c.k();
    if k < 2 {
        return Err(Error::invalid("silhouette needs at least two clusters"));
    }
    let sizes = c.cluster_sizes();
    if let Some(empty) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::invalid(format!(
            "cluster {empty} is empty; silhouette undefined"
        )));
    }

    let per_object: Vec<f64> = (0..d.n())
        .into_par_iter()
        .map(|i| {
            let own = c.cluster_of(i);
            if sizes[own] == 1 {
                return 0.0;
            }
            let xi = d.row(i);
            let mut sums = vec![0.0; k];
            for (j, xj) in d.rows().enumerate() {
                if j != i {
                    sums[c.cluster_of(j)] += squared_distance_unchecked(xi, xj).sqrt();
                }
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&q| q != own)
                .map(|q| sums[q] / sizes[q] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom > 0.0 {
                (b - a) / denom
            } else {
                0.0
            }
        })
        .collect();
    Ok(per_object.iter().sum::<f64>() / d.n() as f64)
}

/// Fraction of objects that carry the majority label of their cluster.
pub fn purity<L: Eq + Hash>(c: &Clustering, labels: &[L]) -> Result<f64> {
    if labels.len() != c.n() {
        return Err(Error::invalid(format!("{} labels for {} objects", labels.len(), c.n())));
    }
    let mut counts: Vec<HashMap<&L, usize>> = vec![HashMap::new(); c.k()];
    for (label, &cluster) in labels.iter().zip(c.assignment()) {
        *counts[cluster].entry(label).or_default() += 1;
    }
    let majority: usize = counts.iter().map(|h| h.values().copied().max().unwrap_or(0)).sum();
    Ok(majority as f64 / c.n() as f64)
}

/// Every measure for one clustering. Serializes to a flat JSON object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub avg: f64,
    pub var_population: f64,
    /// `None` for a single object.
    pub var_sample: Option<f64>,
    pub jain: f64,
    pub max: f64,
    /// `None` when fewer than two clusters were requested.
    pub silhouette: Option<f64>,
    /// Present iff the dataset carries labels.
    pub purity: Option<f64>,
}

impl MetricsReport {
    pub fn evaluate(d: &Dataset, c: &Clustering) -> Result<Self> {
        let r = representativity(d, c)?;
        let silhouette = if c.k() >= 2 { Some(silhouette(d, c)?) } else { None };
        let purity = d.labels().map(|l| purity(c, l)).transpose()?;
        Ok(Self {
            avg: avg(&r),
            var_population: variance(&r, VarianceMode::Population)?,
            var_sample: variance(&r, VarianceMode::Sample).ok(),
            jain: jain(&r),
            max: max_representativity_loss(&r),
            silhouette,
            purity,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("metrics serialize")
    }
}
