//! Distances between attribute vectors.
//!
//! The optimizer works with the squared Euclidean distance `d(x, y)`; the
//! fairness measures are reported on the plain Euclidean distance `dist`.

use crate::error::{Error, Result};

/// `Σ (x[a] − y[a])²`. Errors when the vectors differ in length.
pub fn squared_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    Ok(squared_distance_unchecked(x, y))
}

/// `√squared_distance(x, y)`.
pub fn euclidean_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    squared_distance(x, y).map(f64::sqrt)
}

/// Hot-path variant for callers that already validated dimensions.
#[inline]
pub(crate) fn squared_distance_unchecked(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let diff = a - b;
            diff * diff
        })
        .sum()
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}
