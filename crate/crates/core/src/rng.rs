//! Seeded random streams.
//!
//! Every stream is a `ChaCha8Rng` built with `SeedableRng::seed_from_u64`.
//! Child seeds are derived with the SplitMix64 finalizer so that trial `i`
//! of a sweep gets the same seed regardless of evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifier written into reports so that runs can be replayed with the
/// same generator.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.9/seed_from_u64+splitmix64";

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child stream `index` under `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ index)
}

/// Seeds of the first `n` trials of a sweep.
pub fn trial_seeds(master_seed: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| derive_seed(master_seed, i)).collect()
}
