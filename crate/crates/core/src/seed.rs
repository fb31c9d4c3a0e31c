//! Seed derivation for reproducible parallel sweeps.
//!
//! Every work item gets its own seed computed from the base seed and its grid
//! coordinates, so results never depend on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// The SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of realization `realization` at control-grid position `control`.
pub fn realization_seed(base_seed: u64, control: usize, realization: usize) -> u64 {
    base_seed ^ splitmix64(splitmix64(control as u64).wrapping_add(realization as u64))
}

/// Independent stream `stream` derived from `seed`, e.g. one per random matrix.
pub fn substream(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x5eed)))
}

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}
