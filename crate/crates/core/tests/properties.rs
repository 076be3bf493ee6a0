//! Randomized properties of the fitting procedures.

use proptest::prelude::*;
use rfkm_core::kmeans::kmeans_fit;
use rfkm_core::rfkm::{assignment_step, assignment_step_audited, objective, smooth_max};
use rfkm_core::synthetic::{gaussian_blobs, uniform};
use rfkm_core::{init_random, rfkm_fit, Clustering, Dataset, Lambda2, RfkmParams, RngSeed};

fn random_dataset(n: usize, m: usize, seed: u64) -> Dataset {
    if seed.is_multiple_of(2) {
        gaussian_blobs(n, m, 3, 4.0, 1.0, RngSeed(seed))
    } else {
        uniform(n, m, 10.0, RngSeed(seed))
    }
}

/// Representatives placed at random objects, assignment random.
fn random_clustering(d: &Dataset, k: usize, seed: u64) -> Clustering {
    let init = init_random(d, k, RngSeed(seed)).unwrap();
    let reps = (0..k)
        .map(|c| d.row((c * 7 + seed as usize) % d.n()).to_vec())
        .collect();
    Clustering::new(init.assignment().to_vec(), reps).unwrap()
}

fn params(l1: f64, l2: f64, phi: f64) -> RfkmParams {
    RfkmParams {
        lambda1: l1,
        lambda2: Lambda2::Fixed(l2),
        phi,
        ..RfkmParams::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn zero_weights_reproduce_kmeans(n in 10usize..=200, m in 1usize..5, k in 2usize..6, seed in any::<u64>()) {
        let d = random_dataset(n, m, seed);
        let rfkm = rfkm_fit(&d, k, &RfkmParams { seed: RngSeed(seed), ..params(0.0, 0.0, 3.0) }).unwrap();
        let km = kmeans_fit(&d, k, RngSeed(seed), 100, 1e-6).unwrap();
        prop_assert_eq!(rfkm.clustering.assignment(), km.clustering.assignment());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn assignment_sweep_never_increases_objective(
        n in 5usize..=100,
        k in 1usize..=5,
        seed in any::<u64>(),
        l1 in 0.0f64..3.0,
        l2 in 0.0f64..10.0,
        phi in 0.5f64..6.0,
    ) {
        let d = random_dataset(n, 2, seed);
        let c = random_clustering(&d, k.min(n), seed);
        let p = params(l1, l2, phi);
        let before = objective(&d, &c, &p).unwrap().total;
        let (next, _) = assignment_step(&d, &c, &p).unwrap();
        let after = objective(&d, &next, &p).unwrap().total;
        prop_assert!(after <= before + 1e-6 * before.abs(), "{} -> {}", before, after);
    }

    #[test]
    fn incremental_edit_matches_scratch(n in 2usize..=50, k in 1usize..=4, seed in any::<u64>(), phi in 0.5f64..10.0) {
        let d = random_dataset(n, 3, seed);
        let c = random_clustering(&d, k.min(n), seed);
        let (_, _, audit) = assignment_step_audited(&d, &c, &params(1.0, n as f64 / 10.0, phi)).unwrap();
        prop_assert!(audit.max_relative_error < 1e-6, "{:?}", audit);
    }

    #[test]
    fn fit_objective_history_is_finite(n in 10usize..=80, k in 2usize..=4, seed in any::<u64>()) {
        let d = random_dataset(n, 2, seed);
        let fit = rfkm_fit(&d, k, &RfkmParams { seed: RngSeed(seed), ..RfkmParams::default() }).unwrap();
        prop_assert!(fit.history.iter().all(|v| v.is_finite()));
        prop_assert!(!fit.clustering.has_empty_cluster());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smooth_max_bounds(v in prop::collection::vec(-100.0f64..100.0, 1..50), phi in 0.01f64..50.0) {
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let s = smooth_max(&v, phi).unwrap();
        prop_assert!(max <= s + 1e-9);
        prop_assert!(s <= max + (v.len() as f64).ln() / phi + 1e-9);
    }
}
