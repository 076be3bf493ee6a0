//! Seeded randomness.
//!
//! All random draws go through [`SeededRng`], a ChaCha8 stream
//! (`rand_chacha::ChaCha8Rng`) keyed by `ChaCha8Rng::seed_from_u64(seed)`.
//! Bounded integers are drawn by rejection sampling on raw `u64` output
//! (`x % n` after discarding `x < 2^64 mod n`), so the sequence of draws is
//! fixed by the seed alone and does not depend on `rand` sampling internals.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

/// 64-bit seed fixing an initialization and the whole run trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Seed for run `index` of stream `stream`, derived from `self` with the
    /// SplitMix64 finalizer.
    pub fn derive(self, stream: u64, index: u64) -> RngSeed {
        let mut z = splitmix64(self.0 ^ splitmix64(stream.wrapping_add(0x5851_f42d_4c95_7f2d)));
        z = splitmix64(z.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        RngSeed(z)
    }
}

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: RngSeed) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed.0))
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        let n = n as u64;
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.0.next_u64();
            if x >= threshold {
                return (x % n) as usize;
            }
        }
    }
}
