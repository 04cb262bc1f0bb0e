//! Randomness used by the library.
//!
//! Graph sampling uses a counter-based SplitMix64: the draw for unordered pair
//! number `k` (row-major over `u < v`, 0-based) is
//!
//! ```text
//! x = mix(seed + (k + 1) * 0x9E3779B97F4A7C15)
//! u = (x >> 11) * 2^-53
//! ```
//!
//! and the pair is an edge iff `u < p`. `mix` is the SplitMix64 finalizer.
//! Because each draw depends only on `(seed, k)`, samples do not depend on the
//! thread count or platform.
//!
//! Everything else (audit subsets, random bijections) uses ChaCha8 seeded from
//! the seed mixed with a per-purpose tag, one stream per vertex.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

#[inline]
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` for pair index `k`.
#[inline]
pub fn pair_uniform(seed: RngSeed, k: u64) -> f64 {
    let x = splitmix64_mix(seed.0.wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)));
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// ChaCha8 generator for one `(purpose, stream)` slot.
pub fn stream_rng(seed: RngSeed, tag: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0 ^ splitmix64_mix(tag));
    rng.set_stream(stream);
    rng
}
