//! Deterministic parallel sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Runs `f` on `n` independently seeded generators, in parallel, and returns
/// the results in index order, so the output does not depend on scheduling.
pub(crate) fn seeded_map<T, F>(seed: u64, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            f(&mut ChaCha8Rng::seed_from_u64(
                seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ i,
            ))
        })
        .collect()
}
