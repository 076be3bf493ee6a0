use serde::{Deserialize, Serialize};

use super::{Resolved, RfkmParams};
use crate::clustering::Clustering;
use crate::dataset::Dataset;
use crate::distance::squared_distance_unchecked;
use crate::error::{Error, Result};

/// `ln Σ exp(vᵢ)` with the maximum factored out. Empty input gives `-∞`.
pub(crate) fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `ln(eᵃ + eᵇ)`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Smoothed maximum `(1/φ) · ln Σ exp(φ·vᵢ)`.
///
/// Lies in `[max v, max v + ln(n)/φ]` and never overflows for finite input.
pub fn smooth_max(values: &[f64], phi: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("smooth_max of an empty list"));
    }
    if !(phi > 0.0 && phi.is_finite()) {
        return Err(Error::invalid(format!("phi must be positive and finite, got {phi}")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("smooth_max values must be finite"));
    }
    Ok(smooth_max_unchecked(values, phi))
}

/// Shifts by the largest value before scaling so a single value maps to itself exactly.
pub(crate) fn smooth_max_unchecked(values: &[f64], phi: f64) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + values.iter().map(|v| (phi * (v - max)).exp()).sum::<f64>().ln() / phi
}

/// The three loss terms and their weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    /// Σ d
    pub term1: f64,
    /// Σ d²
    pub term2: f64,
    /// smoothed max of d
    pub term3: f64,
    /// term1 + λ₁·term2 + λ₂·term3
    pub total: f64,
}

/// Exact objective of `c` on `d`; `d(·,·)` is the squared Euclidean distance.
pub fn objective(d: &Dataset, c: &Clustering, p: &RfkmParams) -> Result<ObjectiveBreakdown> {
    c.check_consistent(d)?;
    let r = p.resolve(d.n())?;
    Ok(objective_resolved(&losses(d, c), &r))
}

pub(crate) fn objective_resolved(losses: &[f64], r: &Resolved) -> ObjectiveBreakdown {
    let term1: f64 = losses.iter().sum();
    let term2: f64 = losses.iter().map(|v| v * v).sum();
    let term3 = smooth_max_unchecked(losses, r.phi);
    ObjectiveBreakdown {
        term1,
        term2,
        term3,
        total: term1 + r.lambda1 * term2 + r.lambda2 * term3,
    }
}

/// Per-object squared distance to the assigned representative.
pub(crate) fn losses(d: &Dataset, c: &Clustering) -> Vec<f64> {
    d.rows()
        .zip(c.assignment())
        .map(|(x, &k)| squared_distance_unchecked(x, c.representative(k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rfkm::Lambda2;
    use crate::toy;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn smooth_max_values() {
        assert_eq!(smooth_max(&[0.7], 3.0).unwrap(), 0.7);
        assert_abs_diff_eq!(smooth_max(&[1.0, 2.0], 3.0).unwrap(), 2.0163, epsilon = 1e-3);
        assert_abs_diff_eq!(smooth_max(&[0.0, 0.0, 0.0], 3.0).unwrap(), 0.3662, epsilon = 1e-4);
        assert_abs_diff_eq!(smooth_max(&[0.0; 3], 7.0).unwrap(), 3f64.ln() / 7.0, epsilon = 1e-15);
        assert!(smooth_max(&[], 3.0).is_err());
        assert!(smooth_max(&[1.0], 0.0).is_err());
        assert!(smooth_max(&[f64::NAN], 1.0).is_err());
    }

    #[test]
    fn smooth_max_no_overflow() {
        let s = smooth_max(&[1e6, 1e6 - 1.0, 3.0], 50.0).unwrap();
        assert!(s.is_finite());
        assert!(s >= 1e6);
    }

    #[test]
    fn log_helpers() {
        assert_eq!(log_sum_exp(std::iter::empty()), f64::NEG_INFINITY);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 2.0), 2.0);
        assert_abs_diff_eq!(log_add_exp(1.0, 2.0), (1f64.exp() + 2f64.exp()).ln(), epsilon = 1e-14);
    }

    #[test]
    fn degenerate_lambdas_give_kmeans_objective() {
        let d = toy::two_cluster_points();
        let p = RfkmParams {
            lambda1: 0.0,
            lambda2: Lambda2::Fixed(0.0),
            ..RfkmParams::default()
        };
        let o = objective(&d, &toy::left_configuration(&d), &p).unwrap();
        assert_abs_diff_eq!(o.total, 5.5, epsilon = 1e-12);
        assert_eq!(o.total, o.term1);
    }

    #[test]
    fn all_objects_on_their_representative() {
        let d = toy::two_cluster_points();
        let c = Clustering::new((0..5).collect(), d.rows().map(<[f64]>::to_vec).collect()).unwrap();
        let p = RfkmParams {
            lambda2: Lambda2::Fixed(0.5),
            ..RfkmParams::default()
        };
        let o = objective(&d, &c, &p).unwrap();
        assert_eq!((o.term1, o.term2), (0.0, 0.0));
        assert_abs_diff_eq!(o.term3, 5f64.ln() / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(o.total, 0.5 * 5f64.ln() / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn inconsistent_input() {
        let d = toy::two_cluster_points();
        let c = Clustering::new(vec![0; 4], vec![vec![0.0, 0.0]]).unwrap();
        assert!(objective(&d, &c, &RfkmParams::default()).is_err());
    }

    proptest! {
        #[test]
        fn smooth_max_bounds(v in prop::collection::vec(0.0f64..50.0, 1..30), phi in 0.1f64..20.0) {
            let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let s = smooth_max(&v, phi).unwrap();
            prop_assert!(s >= max - 1e-9);
            prop_assert!(s <= max + (v.len() as f64).ln() / phi + 1e-9);
        }

        #[test]
        fn smooth_max_monotone(v in prop::collection::vec(0.0f64..50.0, 1..30), idx in any::<prop::sample::Index>(), bump in 0.0f64..5.0, phi in 0.1f64..20.0) {
            let mut w = v.clone();
            let i = idx.index(w.len());
            w[i] += bump;
            prop_assert!(smooth_max(&w, phi).unwrap() >= smooth_max(&v, phi).unwrap() - 1e-12);
        }
    }
}
