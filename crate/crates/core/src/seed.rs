//! Seed splitting.
//!
//! Every random stream in a simulation is derived from the master seed by
//! hashing a path of tags through SplitMix64:
//!
//! ```text
//! derive(seed, [t0, t1, ...]) = mix(... mix(mix(seed ^ GOLDEN) ^ t0 ...) ^ t1 ...)
//! ```
//!
//! so run `r` uses `derive(master, [RUN, r])`, and radar `i` inside that run
//! uses `derive(run_seed, [RADAR, i])`. Adding runs or radars never perturbs
//! the streams of existing ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const RUN: u64 = 0x52554e;
pub const TRUTH: u64 = 0x545255;
pub const INIT: u64 = 0x494e49;
pub const ACCURACY: u64 = 0x414343;
pub const MEASURE: u64 = 0x4d4541;
pub const SELECT: u64 = 0x53454c;
pub const RADAR: u64 = 0x524144;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(seed), |acc, &tag| {
        splitmix64(acc ^ splitmix64(tag))
    })
}

pub fn rng(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, path))
}
