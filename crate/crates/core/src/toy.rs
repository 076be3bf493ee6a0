//! Two small worked examples of representativity fairness.
//!
//! Case 1: one cluster of four points scored against two candidate
//! representatives, the centroid `(2.5, 2)` ("black") and `(3, 2)` ("grey").
//! Case 2: five points split two ways with centroid representatives; "left"
//! isolates `(5,5)`, "right" pairs `(3,3)` with `(5,5)`.

use crate::clustering::Clustering;
use crate::dataset::Dataset;
use crate::error::Result;
use crate::metrics::MetricsReport;
use crate::rfkm::{objective, Lambda2, ObjectiveBreakdown, RfkmParams};

pub const BLACK: [f64; 2] = [2.5, 2.0];
pub const GREY: [f64; 2] = [3.0, 2.0];

pub fn blue_points() -> Dataset {
    Dataset::from_rows(&[[2.0, 1.0], [1.0, 2.0], [2.0, 3.0], [5.0, 2.0]])
        .expect("valid points")
        .with_attribute_names(vec!["x".into(), "y".into()])
        .expect("two names")
}

/// All objects of `d` in one cluster represented by `rep`.
pub fn single_cluster(d: &Dataset, rep: [f64; 2]) -> Clustering {
    Clustering::new(vec![0; d.n()], vec![rep.to_vec()]).expect("valid clustering")
}

pub fn two_cluster_points() -> Dataset {
    Dataset::from_rows(&[[1.0, 1.0], [1.0, 2.0], [2.0, 1.0], [3.0, 3.0], [5.0, 5.0]])
        .expect("valid points")
        .with_attribute_names(vec!["x".into(), "y".into()])
        .expect("two names")
}

pub fn left_configuration(d: &Dataset) -> Clustering {
    Clustering::with_centroids(d, vec![0, 0, 0, 0, 1], 2).expect("valid clustering")
}

pub fn right_configuration(d: &Dataset) -> Clustering {
    Clustering::with_centroids(d, vec![0, 0, 0, 1, 1], 2).expect("valid clustering")
}

/// Objective weights used for case 2: λ₁ = 1, λ₂ = n/10 = 0.5, φ = 3.
pub fn case2_params() -> RfkmParams {
    RfkmParams {
        lambda1: 1.0,
        lambda2: Lambda2::Auto,
        phi: 3.0,
        ..RfkmParams::default()
    }
}

/// One named claim about a pair of configurations.
#[derive(Debug, Clone)]
pub struct Check {
    pub claim: String,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct ToyAnalysis {
    pub names: [&'static str; 2],
    pub metrics: [MetricsReport; 2],
    pub objectives: Option<[ObjectiveBreakdown; 2]>,
    pub checks: Vec<Check>,
}

impl ToyAnalysis {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// `fair` should win on Max, Var and Jain, `plain` on Avg.
fn directional_checks(names: [&str; 2], plain: &MetricsReport, fair: &MetricsReport) -> Vec<Check> {
    let [p, f] = names;
    let var = |m: &MetricsReport| m.var_sample.unwrap_or(m.var_population);
    vec![
        Check {
            claim: format!("{f} has lower Max than {p}"),
            holds: fair.max < plain.max,
        },
        Check {
            claim: format!("{f} has lower Var than {p}"),
            holds: var(fair) < var(plain),
        },
        Check {
            claim: format!("{f} has higher Jain than {p}"),
            holds: fair.jain > plain.jain,
        },
        Check {
            claim: format!("{p} has lower Avg than {f}"),
            holds: plain.avg < fair.avg,
        },
    ]
}

pub fn analyze_case1() -> Result<ToyAnalysis> {
    let d = blue_points();
    let black = MetricsReport::evaluate(&d, &single_cluster(&d, BLACK))?;
    let grey = MetricsReport::evaluate(&d, &single_cluster(&d, GREY))?;
    let names = ["black", "grey"];
    let checks = directional_checks(names, &black, &grey);
    Ok(ToyAnalysis {
        names,
        metrics: [black, grey],
        objectives: None,
        checks,
    })
}

pub fn analyze_case2() -> Result<ToyAnalysis> {
    let d = two_cluster_points();
    let (left, right) = (left_configuration(&d), right_configuration(&d));
    let ml = MetricsReport::evaluate(&d, &left)?;
    let mr = MetricsReport::evaluate(&d, &right)?;
    let p = case2_params();
    let ol = objective(&d, &left, &p)?;
    let or = objective(&d, &right, &p)?;
    let names = ["left", "right"];
    let mut checks = directional_checks(names, &ml, &mr);
    checks.push(Check {
        claim: "RFKM objective prefers right over left".into(),
        holds: ol.total > or.total,
    });
    Ok(ToyAnalysis {
        names,
        metrics: [ml, mr],
        objectives: Some([ol, or]),
        checks,
    })
}
