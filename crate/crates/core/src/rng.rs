//! Seeded random streams and the seed-splitting rule.
//!
//! A master seed and a shard index select a ChaCha8 key and stream:
//! `ChaCha8Rng::seed_from_u64(master)` followed by `set_stream(shard)`.
//! Work is cut into fixed-size shards before any thread sees it, so output
//! never depends on how many threads run the shards.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

/// Samples generated per shard when datasets are built in parallel.
pub const SHARD_SIZE: usize = 4096;

pub fn seeded(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `shard` under `master`.
pub fn shard_rng(master: u64, shard: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(shard);
    rng
}

/// Seed for trial `index` of a repeated experiment under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    use rand::RngCore;
    shard_rng(master ^ 0x5eed_7a1a_u64, index).next_u64()
}
