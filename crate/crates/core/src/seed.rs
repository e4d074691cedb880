//! Deterministic seed derivation for independent jobs and restarts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for stream `id` of `master`.
pub fn derive_seed(master: u64, id: u64) -> u64 {
    splitmix64(master ^ splitmix64(id.wrapping_add(0x6A09_E667_F3BC_C909)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_rng(master: u64, id: u64) -> ChaCha8Rng {
    rng_from_seed(derive_seed(master, id))
}
