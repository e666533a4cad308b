//! Keyed pseudo-random functions used for bucket assignment and seed derivation.
//!
//! Everything here is a pure function of its inputs, so bucket maps can be
//! evaluated position by position without storing a table.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output function.
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Keyed hash of `x` under `key`. Two mixing rounds so that consecutive
/// inputs under the same key are decorrelated.
#[inline]
pub fn keyed(key: u64, x: u64) -> u64 {
    mix64(mix64(key ^ x.wrapping_mul(GOLDEN_GAMMA)) ^ key.rotate_left(29))
}

/// Child seed number `index` of `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    keyed(mix64(master), index)
}

/// Maps a uniform 64-bit word onto `0..n` by multiply-high.
#[inline]
pub fn reduce(word: u64, n: u64) -> u64 {
    ((word as u128 * n as u128) >> 64) as u64
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
