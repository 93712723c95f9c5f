//! Seeded randomness.
//!
//! Streams are ChaCha8 (`rand_chacha`) seeded through `SeedableRng::seed_from_u64`;
//! bounded draws use [`below`], which rejects the biased tail of the 64-bit
//! range so results are reproducible from the algorithm description alone.
//! Sub-seeds are derived with the SplitMix64 finalizer.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in `[0, bound)`.
pub fn below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0, "empty range");
    // largest multiple of `bound` that fits, minus one
    let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
    loop {
        let x = rng.next_u64();
        if x <= zone {
            return x % bound;
        }
    }
}

/// Uniform integer in `[lo, hi]`.
pub fn in_range<R: RngCore>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    debug_assert!(lo <= hi);
    match (hi - lo).checked_add(1) {
        Some(span) => lo + below(rng, span),
        None => rng.next_u64(),
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash a seed together with context words into a new seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(seed), |acc, &p| {
        mix64(acc.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ p)
    })
}

/// SplitMix64 generator; used where a tiny inline generator suffices.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        mix64(self.0)
    }
}
