//! Deterministic stream splitting for simulations.
//!
//! Every (node, update) pair draws from its own ChaCha stream derived
//! from the run seed by splitmix64 finalizer mixing. Sampling is then a
//! pure function of `(seed, node, update)`: results do not depend on
//! event interleaving, so reruns are bit-identical and full-tree /
//! tagged-path runs can share structure without sharing state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Virtual node id reserved for the exogenous arrival process.
pub(crate) const ARRIVAL_NODE: u32 = u32::MAX;

/// splitmix64 finalizer: bijective, avalanching.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn stream_seed(seed: u64, node: u32, update: u64) -> u64 {
    let a = splitmix64(seed);
    let b = splitmix64(a ^ splitmix64(node as u64));
    splitmix64(b ^ splitmix64(update))
}

pub(crate) fn stream_rng(seed: u64, node: u32, update: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, node, update))
}
