//! Replicate stream derivation. Each replicate owns an independent
//! ChaCha12 stream whose 64-bit seed is
//! `splitmix64(master_seed XOR splitmix64(replicate_index))`,
//! so reports are reproducible for a fixed master seed regardless of how
//! replicates are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the stream owned by one replicate.
pub fn replicate_seed(master: u64, replicate: u64) -> u64 {
    splitmix64(master ^ splitmix64(replicate))
}

/// The random stream for one replicate.
pub fn replicate_rng(master: u64, replicate: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(replicate_seed(master, replicate))
}
