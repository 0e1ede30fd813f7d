//! Deterministic RNG derivation.
//!
//! Every randomized task gets its own counter-keyed ChaCha stream, so results
//! depend only on `(seed, task index)` and never on which worker thread runs
//! the task or in what order tasks finish.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for the `index`-th task of a run seeded with `seed`.
pub(crate) fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// SplitMix64 finalizer over `seed ^ f(salt)`; used to derive independent
/// child seeds (for example one generator seed and one bootstrap seed per
/// simulation replication) from a single master seed.
pub(crate) fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
