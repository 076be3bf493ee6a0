//! Fixed-point update of one cluster representative.
//!
//! Setting the gradient of the objective with respect to `R(C)` to zero
//! gives `R(C)` as a weighted mean of the members of `C` with weights
//!
//! ```text
//! w(X) = 1 + 2·λ₁·d(X, R) + λ₂ · exp(φ·d(X, R)) / D
//! ```
//!
//! where `D = Σ exp(φ·d(X', R(C(X'))))` over the whole dataset. `R` appears
//! on both sides, so the mean is iterated with `D` held fixed. The plain
//! iteration can overshoot because the weights grow with distance; steps are
//! therefore backtracked until the exact objective does not increase.

use super::objective::{log_add_exp, log_sum_exp, losses};
use super::{Resolved, RfkmParams};
use crate::clustering::Clustering;
use crate::dataset::Dataset;
use crate::distance::squared_distance_unchecked;
use crate::error::{Error, Result};

/// Weight of one object split by loss term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParts {
    /// From the linear term; always 1.
    pub linear: f64,
    /// `2·λ₁·d`
    pub squared: f64,
    /// `λ₂·exp(φ·d)/D`
    pub smooth_max: f64,
}

impl WeightParts {
    pub fn total(&self) -> f64 {
        self.linear + self.squared + self.smooth_max
    }
}

/// `ln D` for the current clustering.
pub fn log_global_denominator(d: &Dataset, c: &Clustering, p: &RfkmParams) -> Result<f64> {
    c.check_consistent(d)?;
    let r = p.resolve(d.n())?;
    Ok(log_denominator(&losses(d, c), r.phi))
}

pub(crate) fn log_denominator(losses: &[f64], phi: f64) -> f64 {
    log_sum_exp(losses.iter().map(|v| phi * v))
}

fn weight(loss: f64, r: &Resolved, log_den: f64) -> WeightParts {
    WeightParts {
        linear: 1.0,
        squared: if r.lambda1 == 0.0 { 0.0 } else { 2.0 * r.lambda1 * loss },
        smooth_max: if r.lambda2 == 0.0 {
            0.0
        } else {
            r.lambda2 * (r.phi * loss - log_den).exp()
        },
    }
}

/// Weights of the members of `cluster` against `representative`.
pub fn object_weights(
    d: &Dataset,
    c: &Clustering,
    cluster: usize,
    representative: &[f64],
    p: &RfkmParams,
    log_denominator: f64,
) -> Result<Vec<WeightParts>> {
    c.check_consistent(d)?;
    let r = p.resolve(d.n())?;
    Ok(c.members(cluster)
        .into_iter()
        .map(|i| {
            weight(
                squared_distance_unchecked(d.row(i), representative),
                &r,
                log_denominator,
            )
        })
        .collect())
}

/// Runs the fixed point for `cluster_index`, starting from its current
/// representative, with `ln D` frozen at `log_denominator` for the weights.
///
/// Each step moves toward the weighted mean. A step is taken only if it does
/// not increase the exact objective (all other representatives and all
/// assignments fixed); otherwise it is halved, up to [`MAX_HALVINGS`] times.
/// Stops once the representative moves less than `rep_tol` (Euclidean), when
/// no halving helps, or after `max_rep_fixed_point_iters` steps.
pub fn update_representative(
    d: &Dataset,
    c: &Clustering,
    cluster_index: usize,
    p: &RfkmParams,
    log_denominator: f64,
) -> Result<Vec<f64>> {
    c.check_consistent(d)?;
    if cluster_index >= c.k() {
        return Err(Error::invalid(format!(
            "cluster {cluster_index} out of range for k={}",
            c.k()
        )));
    }
    let r = p.resolve(d.n())?;
    let members = c.members(cluster_index);
    if members.is_empty() {
        return Err(Error::invalid(format!("cluster {cluster_index} is empty")));
    }
    let losses = losses(d, c);
    let log_outside = log_sum_exp(
        losses
            .iter()
            .zip(c.assignment())
            .filter(|&(_, &a)| a != cluster_index)
            .map(|(v, _)| r.phi * v),
    );
    Ok(fixed_point(
        d,
        &members,
        c.representative(cluster_index),
        &r,
        log_denominator,
        log_outside,
    ))
}

pub const MAX_HALVINGS: usize = 30;

/// Exact objective terms that depend on one representative:
/// `Σ_C (d + λ₁d²) + (λ₂/φ)·ln(e^outside + Σ_C e^{φd})`.
fn cluster_objective(d: &Dataset, members: &[usize], rep: &[f64], r: &Resolved, log_outside: f64) -> f64 {
    let mut sum = 0.0;
    let scaled: Vec<f64> = members
        .iter()
        .map(|&i| {
            let loss = squared_distance_unchecked(d.row(i), rep);
            sum += loss + r.lambda1 * loss * loss;
            r.phi * loss
        })
        .collect();
    if r.lambda2 == 0.0 {
        return sum;
    }
    let inside = log_sum_exp(scaled.iter().copied());
    sum + r.lambda2 * log_add_exp(log_outside, inside) / r.phi
}

pub(crate) fn fixed_point(
    d: &Dataset,
    members: &[usize],
    start: &[f64],
    r: &Resolved,
    log_den: f64,
    log_outside: f64,
) -> Vec<f64> {
    let m = d.m();
    // With unit weights the weighted mean is the exact minimizer.
    let plain = r.lambda1 == 0.0 && r.lambda2 == 0.0;
    let mut rep = start.to_vec();
    let mut current = if plain {
        0.0
    } else {
        cluster_objective(d, members, &rep, r, log_outside)
    };
    let mut target = vec![0.0; m];
    let mut trial = vec![0.0; m];
    for _ in 0..r.max_rep_iters {
        target.iter_mut().for_each(|v| *v = 0.0);
        let mut total = 0.0;
        for &i in members {
            let x = d.row(i);
            let w = weight(squared_distance_unchecked(x, &rep), r, log_den).total();
            total += w;
            for (acc, v) in target.iter_mut().zip(x) {
                *acc += w * v;
            }
        }
        target.iter_mut().for_each(|v| *v /= total);
        if target.iter().any(|v| !v.is_finite()) {
            break;
        }
        let full_step = squared_distance_unchecked(&target, &rep).sqrt();
        if plain {
            std::mem::swap(&mut rep, &mut target);
            if full_step < r.rep_tol {
                break;
            }
            continue;
        }

        let mut fraction = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            for ((t, a), b) in trial.iter_mut().zip(&rep).zip(&target) {
                *t = a + fraction * (b - a);
            }
            let value = cluster_objective(d, members, &trial, r, log_outside);
            if value <= current {
                accepted = Some(value);
                break;
            }
            fraction *= 0.5;
        }
        let Some(value) = accepted else { break };
        current = value;
        std::mem::swap(&mut rep, &mut trial);
        if fraction * full_step < r.rep_tol {
            break;
        }
    }
    rep
}
