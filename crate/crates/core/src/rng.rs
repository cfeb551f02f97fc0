//! Seed derivation and the deterministic generator used everywhere.
//!
//! Every random stream in the crate is a ChaCha8 keystream (counter-based)
//! keyed by a 64-bit seed. Per-test seeds are derived by hashing
//! `(master_seed, generation, individual, test)` so results do not depend
//! on evaluation order or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type DetRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes an ordered list of words into one seed.
pub fn combine(words: &[u64]) -> u64 {
    words.iter().fold(mix(0x5153_4254), |acc, &w| mix(acc ^ mix(w)))
}

/// Seed for test `test` of individual `individual` in generation `generation`.
pub fn test_seed(master: u64, generation: u64, individual: u64, test: u64) -> u64 {
    combine(&[master, generation, individual, test])
}

pub fn seeded(seed: u64) -> DetRng {
    DetRng::seed_from_u64(seed)
}
