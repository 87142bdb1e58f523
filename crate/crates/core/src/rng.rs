//! Counter-based random streams.
//!
//! Every random task (a bootstrap replicate, a Monte Carlo replicate) gets
//! its own ChaCha stream keyed by the master seed and a domain tag and
//! selected by a 64-bit stream id, so tasks can run in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream domains keep unrelated consumers of one master seed apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Bootstrap = 1,
    Simulation = 2,
    Experiment = 3,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for task `(major, minor)` under `seed` and `domain`.
pub fn stream(seed: u64, domain: Domain, major: u32, minor: u32) -> StreamRng {
    let key = splitmix64(seed ^ splitmix64(domain as u64));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(((major as u64) << 32) | minor as u64);
    rng
}

/// Derives a child seed, used when one seeded task spawns a seeded run.
pub fn derive_seed(seed: u64, domain: Domain, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(domain as u64)) ^ index)
}
