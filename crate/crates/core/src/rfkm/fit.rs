use super::assignment::sweep;
use super::objective::{log_sum_exp, losses, objective_resolved, ObjectiveBreakdown};
use super::representative::{fixed_point, log_denominator};
use super::{Resolved, RfkmParams};
use crate::clustering::Clustering;
use crate::dataset::Dataset;
use crate::distance::squared_distance_unchecked;
use crate::error::{Error, Result};
use crate::kmeans::{init_random, relative_change};

#[derive(Debug, Clone)]
pub struct RfkmFit {
    pub clustering: Clustering,
    pub objective: ObjectiveBreakdown,
    /// Assignment sweeps performed.
    pub iterations: usize,
    /// Total objective after the initial representative update and after
    /// every later one.
    pub history: Vec<f64>,
}

/// Fits `k` clusters from a random initialization seeded by `p.seed`.
pub fn rfkm_fit(d: &Dataset, k: usize, p: &RfkmParams) -> Result<RfkmFit> {
    p.validate()?;
    let init = init_random(d, k, p.seed)?;
    rfkm_fit_from(d, init, p)
}

/// Fits starting from a given partition; its representatives seed the first
/// fixed-point update.
///
/// Alternates one full assignment sweep with a fixed-point update of every
/// representative (`ln D` recomputed once per sweep). Stops after a sweep
/// with no moves, when the relative change of the total objective drops
/// below `objective_tol`, or after `max_outer_iters` sweeps.
pub fn rfkm_fit_from(d: &Dataset, initial: Clustering, p: &RfkmParams) -> Result<RfkmFit> {
    initial.check_consistent(d)?;
    if initial.has_empty_cluster() {
        return Err(Error::invalid("initial clustering has an empty cluster"));
    }
    let r = p.resolve(d.n())?;

    let mut c = initial;
    update_all(d, &mut c, &r);
    let mut prev = objective_resolved(&losses(d, &c), &r);
    let mut history = vec![prev.total];
    let mut iterations = 0;

    for it in 1..=p.max_outer_iters {
        iterations = it;
        if sweep(d, &mut c, p, None)? == 0 {
            break;
        }
        update_all(d, &mut c, &r);
        let cur = objective_resolved(&losses(d, &c), &r);
        history.push(cur.total);
        let done = relative_change(prev.total, cur.total) < p.objective_tol;
        prev = cur;
        if done {
            break;
        }
    }

    Ok(RfkmFit {
        clustering: c,
        objective: prev,
        iterations,
        history,
    })
}

fn update_all(d: &Dataset, c: &mut Clustering, r: &Resolved) {
    let mut loss = losses(d, c);
    let log_den = log_denominator(&loss, r.phi);
    let mut members = vec![Vec::new(); c.k()];
    for (i, &a) in c.assignment().iter().enumerate() {
        members[a].push(i);
    }
    for (cluster, members) in members.iter().enumerate() {
        let log_outside = log_sum_exp(
            loss.iter()
                .zip(c.assignment())
                .filter(|&(_, &a)| a != cluster)
                .map(|(v, _)| r.phi * v),
        );
        let rep = fixed_point(d, members, c.representative(cluster), r, log_den, log_outside);
        for &i in members {
            loss[i] = squared_distance_unchecked(d.row(i), &rep);
        }
        c.representative_mut(cluster).copy_from_slice(&rep);
    }
}
