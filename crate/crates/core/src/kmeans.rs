//! Lloyd-style K-Means baseline and the random initialization shared with RFKM.

use crate::clustering::{centroids, Clustering};
use crate::dataset::Dataset;
use crate::distance::squared_distance_unchecked;
use crate::error::{Error, Result};
use crate::rng::{RngSeed, SeededRng};

/// Assigns every object to a uniformly random cluster, then fills each empty
/// cluster (in index order) with one object drawn uniformly from the objects
/// whose cluster has at least two members. Representatives are the resulting
/// centroids.
pub fn init_random(d: &Dataset, k: usize, seed: RngSeed) -> Result<Clustering> {
    check_k(d, k)?;
    let mut rng = SeededRng::new(seed);
    let mut assignment: Vec<usize> = (0..d.n()).map(|_| rng.below(k)).collect();
    let mut sizes = vec![0usize; k];
    for &c in &assignment {
        sizes[c] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let donors: Vec<usize> = (0..d.n()).filter(|&i| sizes[assignment[i]] >= 2).collect();
        // k <= n guarantees a donor exists.
        let pick = donors[rng.below(donors.len())];
        sizes[assignment[pick]] -= 1;
        assignment[pick] = empty;
        sizes[empty] = 1;
    }
    Clustering::with_centroids(d, assignment, k)
}

pub(crate) fn check_k(d: &Dataset, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > d.n() {
        return Err(Error::invalid(format!(
            "k={k} exceeds the number of objects ({})",
            d.n()
        )));
    }
    Ok(())
}

/// Sum of squared distances of every object to its representative.
pub fn kmeans_objective(d: &Dataset, c: &Clustering) -> Result<f64> {
    c.check_consistent(d)?;
    Ok(d.rows()
        .zip(c.assignment())
        .map(|(x, &k)| squared_distance_unchecked(x, c.representative(k)))
        .sum())
}

#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub clustering: Clustering,
    pub objective: f64,
    pub iterations: usize,
    /// Objective after initialization and after every centroid update.
    pub history: Vec<f64>,
}

/// Runs Lloyd iterations from [`init_random`].
///
/// Each iteration sweeps the objects in index order and moves each one to its
/// nearest representative (ties to the lowest index), except that the last
/// member of a cluster never leaves it; then every centroid is recomputed.
/// Stops when a sweep moves nothing, when the relative objective decrease
/// falls below `tol`, or after `max_iters` iterations.
pub fn kmeans_fit(d: &Dataset, k: usize, seed: RngSeed, max_iters: usize, tol: f64) -> Result<KMeansFit> {
    if max_iters == 0 {
        return Err(Error::invalid("max_iters must be at least 1"));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::invalid("tol must be non-negative"));
    }
    let mut c = init_random(d, k, seed)?;
    let mut prev = kmeans_objective(d, &c)?;
    let mut history = vec![prev];
    let mut iterations = 0;
    for it in 1..=max_iters {
        iterations = it;
        if nearest_sweep(d, &mut c) == 0 {
            break;
        }
        let reps = centroids(d, c.assignment(), k);
        c = Clustering::from_parts(c.assignment().to_vec(), reps, k, d.m());
        let cur = kmeans_objective(d, &c)?;
        history.push(cur);
        if relative_change(prev, cur) < tol {
            break;
        }
        prev = cur;
    }
    let objective = *history.last().expect("non-empty history");
    Ok(KMeansFit {
        clustering: c,
        objective,
        iterations,
        history,
    })
}

fn nearest_sweep(d: &Dataset, c: &mut Clustering) -> usize {
    let k = c.k();
    let mut sizes = c.cluster_sizes();
    let mut changed = 0;
    for (i, x) in d.rows().enumerate() {
        let cur = c.cluster_of(i);
        if sizes[cur] == 1 {
            continue;
        }
        let mut best = 0;
        let mut best_cost = f64::INFINITY;
        for cand in 0..k {
            let cost = squared_distance_unchecked(x, c.representative(cand));
            if cost < best_cost {
                best = cand;
                best_cost = cost;
            }
        }
        if best != cur {
            sizes[cur] -= 1;
            sizes[best] += 1;
            c.assignment_mut()[i] = best;
            changed += 1;
        }
    }
    changed
}

pub(crate) fn relative_change(prev: f64, cur: f64) -> f64 {
    let diff = (prev - cur).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / prev.abs().max(f64::MIN_POSITIVE)
    }
}
