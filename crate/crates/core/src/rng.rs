//! Seeded random streams.
//!
//! Every randomized computation uses ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`. Monte Carlo trial `t` of a run with seed `s`
//! uses the stream seeded with `s ^ splitmix64(t)`, so results do not depend
//! on how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The SplitMix64 finalizer applied to `x + golden gamma`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_stream(seed: u64, trial: u64) -> ChaCha8Rng {
    stream(seed ^ splitmix64(trial))
}
