//! Seeded random number generation and seed derivation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used by every sampler in the crate.
pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The splitmix64 finalizer: a bijective avalanche on 64-bit words.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a hash, used to fold model identifiers into seeds.
pub fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Seed for one replicate of one grid point of one model.
///
/// Each component is folded in through [`mix64`], so nearby inputs give
/// unrelated streams and the result does not depend on evaluation order.
pub fn derive_seed(master: u64, model_id: &str, n_index: usize, replicate: usize) -> u64 {
    let mut h = mix64(master ^ fnv1a(model_id));
    h = mix64(h ^ (n_index as u64).wrapping_add(1).wrapping_mul(0xd6e8_feb8_6659_fd93));
    mix64(h ^ (replicate as u64).wrapping_add(1).wrapping_mul(0xa076_1d64_78bd_642f))
}

/// Child seed for a numbered sub-stream of `seed`.
pub fn child_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ mix64(stream.wrapping_add(0x5851_f42d_4c95_7f2d)))
}
