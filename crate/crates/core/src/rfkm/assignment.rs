//! Assignment sweep with representatives held fixed.
//!
//! Each object moves to the cluster minimizing
//! `d + λ₁·d² + λ₂·T_edit`, where `T_edit` is the smoothed max of all
//! losses after that single hypothetical move. The log-sum behind
//! `T_edit` is maintained incrementally so each candidate costs O(m).

use super::objective::{log_add_exp, log_sum_exp, losses};
use super::RfkmParams;
use crate::clustering::Clustering;
use crate::dataset::Dataset;
use crate::distance::squared_distance_unchecked;
use crate::error::Result;

/// Below this fraction of the total mass left after removing one object,
/// the remaining log-sum is recomputed from scratch. Subtracting in log
/// space amplifies the rounding error already carried by the running sum by
/// up to the inverse of this fraction, and the amplified error persists into
/// later edits, so the guard is kept well above machine precision.
const CANCELLATION_GUARD: f64 = 1e-3;

/// Comparison of incremental against from-scratch `T_edit` values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EditAudit {
    pub candidates_checked: usize,
    pub max_relative_error: f64,
}

/// One sweep over the objects in index order, committing each move before
/// the next object is processed. Ties go to the lowest cluster index and the
/// sole member of a cluster never leaves it.
///
/// Returns the new clustering (same representatives) and the number of moves.
pub fn assignment_step(d: &Dataset, c: &Clustering, p: &RfkmParams) -> Result<(Clustering, usize)> {
    let mut next = c.clone();
    let changed = sweep(d, &mut next, p, None)?;
    Ok((next, changed))
}

/// [`assignment_step`] that also recomputes every `T_edit` from scratch and
/// reports the largest relative disagreement. O(n²k); meant for small inputs.
pub fn assignment_step_audited(d: &Dataset, c: &Clustering, p: &RfkmParams) -> Result<(Clustering, usize, EditAudit)> {
    let mut next = c.clone();
    let mut audit = EditAudit::default();
    let changed = sweep(d, &mut next, p, Some(&mut audit))?;
    Ok((next, changed, audit))
}

pub(crate) fn sweep(
    d: &Dataset,
    c: &mut Clustering,
    p: &RfkmParams,
    mut audit: Option<&mut EditAudit>,
) -> Result<usize> {
    c.check_consistent(d)?;
    let r = p.resolve(d.n())?;
    let phi = r.phi;
    let k = c.k();
    let track_edit = r.lambda2 != 0.0 || audit.is_some();

    let mut sizes = c.cluster_sizes();
    let mut loss = losses(d, c);
    let mut log_sum = if track_edit {
        log_sum_exp(loss.iter().map(|v| phi * v))
    } else {
        0.0
    };
    let mut changed = 0;

    for i in 0..d.n() {
        let cur = c.cluster_of(i);
        if sizes[cur] == 1 {
            continue;
        }
        let x = d.row(i);

        // ln Σ_{j≠i} exp(φ·d_j)
        let log_rest = if track_edit {
            let frac = (phi * loss[i] - log_sum).exp();
            if 1.0 - frac < CANCELLATION_GUARD {
                log_sum_exp(loss.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| phi * v))
            } else {
                log_sum + (-frac).ln_1p()
            }
        } else {
            f64::NEG_INFINITY
        };

        let mut best = cur;
        let mut best_cost = f64::INFINITY;
        let mut best_loss = loss[i];
        let mut best_log_sum = log_sum;
        for cand in 0..k {
            let dn = if cand == cur {
                loss[i]
            } else {
                squared_distance_unchecked(x, c.representative(cand))
            };
            let edited = if track_edit {
                log_add_exp(log_rest, phi * dn)
            } else {
                0.0
            };
            if let Some(a) = audit.as_deref_mut() {
                let scratch =
                    log_sum_exp(loss.iter().enumerate().map(|(j, v)| phi * if j == i { dn } else { *v })) / phi;
                let fast = edited / phi;
                let scale = fast.abs().max(scratch.abs()).max(1e-12);
                a.max_relative_error = a.max_relative_error.max((fast - scratch).abs() / scale);
                a.candidates_checked += 1;
            }
            let mut cost = dn + r.lambda1 * dn * dn;
            if r.lambda2 != 0.0 {
                cost += r.lambda2 * edited / phi;
            }
            if cost < best_cost {
                best = cand;
                best_cost = cost;
                best_loss = dn;
                best_log_sum = edited;
            }
        }

        if best != cur {
            sizes[cur] -= 1;
            sizes[best] += 1;
            c.assignment_mut()[i] = best;
            loss[i] = best_loss;
            log_sum = best_log_sum;
            changed += 1;
        }
    }
    Ok(changed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rfkm::{objective, Lambda2};
    use crate::toy;

    #[test]
    fn zero_lambdas_assign_to_nearest() {
        let d = toy::two_cluster_points();
        let c = Clustering::new(vec![1, 1, 1, 0, 1], vec![vec![1.0, 1.0], vec![5.0, 5.0]]).unwrap();
        let p = RfkmParams {
            lambda1: 0.0,
            lambda2: Lambda2::Fixed(0.0),
            ..RfkmParams::default()
        };
        let (next, changed) = assignment_step(&d, &c, &p).unwrap();
        assert_eq!(next.assignment(), &[0, 0, 0, 0, 1]);
        assert_eq!(changed, 3);
        assert_eq!(next.representative(0), c.representative(0));
    }

    #[test]
    fn no_move_when_already_optimal() {
        let d = toy::two_cluster_points();
        let c = toy::right_configuration(&d);
        let p = RfkmParams {
            lambda2: Lambda2::Fixed(0.5),
            ..RfkmParams::default()
        };
        let (next, changed) = assignment_step(&d, &c, &p).unwrap();
        assert_eq!(changed, 0);
        assert_eq!(next, c);
    }

    #[test]
    fn singleton_never_emptied() {
        let d = Dataset::from_rows(&[[0.0], [0.1], [0.2]]).unwrap();
        // Object 2 alone in cluster 1, whose representative is far away.
        let c = Clustering::new(vec![0, 0, 1], vec![vec![0.1], vec![100.0]]).unwrap();
        let (next, changed) = assignment_step(&d, &c, &RfkmParams::default()).unwrap();
        assert_eq!(next.assignment(), &[0, 0, 1]);
        assert_eq!(changed, 0);
    }

    #[test]
    fn left_configuration_edit_matches_full_objective() {
        let d = toy::two_cluster_points();
        let left = toy::left_configuration(&d);
        let p = RfkmParams {
            lambda1: 1.0,
            lambda2: Lambda2::Fixed(0.5),
            phi: 3.0,
            ..RfkmParams::default()
        };
        // Oracle: full objective of each single-edit clustering for object (3,3).
        let totals: Vec<f64> = (0..2)
            .map(|cand| {
                let mut a = left.assignment().to_vec();
                a[3] = cand;
                let edited = Clustering::new(a, left.representatives().map(<[f64]>::to_vec).collect()).unwrap();
                objective(&d, &edited, &p).unwrap().total
            })
            .collect();
        let expected = if totals[1] < totals[0] { 1 } else { 0 };
        let (next, _, audit) = assignment_step_audited(&d, &left, &p).unwrap();
        assert_eq!(next.cluster_of(3), expected, "totals {totals:?}");
        assert!(audit.max_relative_error < 1e-12);
    }
}
