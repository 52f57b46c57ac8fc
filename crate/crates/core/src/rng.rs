//! Seeded randomness.
//!
//! Every random draw in the crate goes through [`seeded`], which builds a
//! ChaCha8 stream from a 64-bit seed. ChaCha8 and `seed_from_u64` are fully
//! specified and platform independent, so identical seeds reproduce
//! identical results everywhere.
//!
//! Sub-seeds for independent units of work (sweep cells, noise
//! trajectories) come from [`derive_seed`], a SplitMix64 finalizer applied
//! to the master seed and the unit index. Any subset of units can therefore
//! be replayed in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for unit `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}
