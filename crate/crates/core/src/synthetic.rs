//! Seeded synthetic data for tests and benchmarks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::StandardNormal;

use crate::dataset::Dataset;
use crate::rng::RngSeed;

/// `n` points in `m` dimensions drawn from `centers` isotropic Gaussians with
/// standard deviation `spread`. Centers are uniform in `[-separation, separation]^m`
/// and objects are dealt to centers round-robin; labels name the source center.
pub fn gaussian_blobs(n: usize, m: usize, centers: usize, separation: f64, spread: f64, seed: RngSeed) -> Dataset {
    assert!(n > 0 && m > 0 && centers > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let means: Vec<Vec<f64>> = (0..centers)
        .map(|_| (0..m).map(|_| rng.gen_range(-separation..=separation)).collect())
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let c = i % centers;
        rows.push(
            means[c]
                .iter()
                .map(|mu| mu + spread * rng.sample::<f64, _>(StandardNormal))
                .collect::<Vec<_>>(),
        );
        labels.push(format!("c{c}"));
    }
    Dataset::from_rows(&rows)
        .expect("finite rows")
        .with_labels(labels)
        .expect("one label per row")
}

/// `n` points uniform in `[0, scale)^m`.
pub fn uniform(n: usize, m: usize, scale: f64, seed: RngSeed) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..m).map(|_| rng.gen::<f64>() * scale).collect())
        .collect();
    Dataset::from_rows(&rows).expect("finite rows")
}
