//! Deterministic seed derivation.
//!
//! Every random choice in a campaign descends from one master seed. A suite's
//! randomness depends only on `(master, suite name, instance index)`, so
//! reordering suites in a configuration never changes what any suite sees.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64, used for seed mixing and as the reference bit source.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub const fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.state)
    }
}

/// The SplitMix64 output finalizer.
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn derive_seed(master: u64, suite: &str, index: u64) -> u64 {
    let s = mix64(master ^ 0x6a09_e667_f3bc_c909);
    let s = mix64(s ^ fnv1a(suite.as_bytes()));
    mix64(s ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// The generator used for protocol coins, permutations and instance
/// generation.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
