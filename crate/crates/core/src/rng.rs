//! Seeded randomness, keyed so that every (seed, trial, vertex) triple gets
//! an independent reproducible stream.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream of random bits for one vertex in one trial.
///
/// The key layout pins byte-level reproducibility across platforms.
pub fn vertex_stream(seed: u64, trial: u64, vertex: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&vertex.to_le_bytes());
    key[24..32].copy_from_slice(&0x6c636c2d636f7265u64.to_le_bytes()); // "lcl-core"
    ChaCha8Rng::from_seed(key)
}

/// SplitMix64 finalizer; a cheap stateless mixer.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Keyed random word, used where one word per (round, vertex) is needed and
/// carrying a full stream would be wasteful.
pub fn keyed_word(seed: u64, trial: u64, vertex: u64, round: u64) -> u64 {
    let mut h = mix64(seed ^ 0xa076_1d64_78bd_642f);
    h = mix64(h ^ trial.wrapping_mul(0xe703_7ed1_a0b4_28db));
    h = mix64(h ^ vertex.wrapping_mul(0x8ebc_6af0_9c88_c6e3));
    mix64(h ^ round.wrapping_mul(0x5899_65cc_7537_4cc3))
}
