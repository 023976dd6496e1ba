//! Data-parallel trial loops with a sequential fallback.
//!
//! Every sampled check in the crate draws trial `i` from its own ChaCha stream
//! (`seed`, stream `i`), so results do not depend on how trials are scheduled.
//! Reductions passed to [`map_reduce`] must be associative and commutative
//! (max, min, counts, boolean and/or); floating-point sums are not.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// RNG for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn map_reduce<T, M, R>(n: usize, identity: T, map: M, reduce: R) -> T
where
    T: Send + Sync + Clone,
    M: Fn(usize) -> T + Send + Sync,
    R: Fn(T, T) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .map(map)
            .reduce(|| identity.clone(), &reduce)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(map).fold(identity, reduce)
    }
}

/// Order-preserving parallel map over `0..n`.
pub fn map_collect<T, M>(n: usize, map: M) -> Vec<T>
where
    T: Send,
    M: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(map).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(map).collect()
    }
}

pub fn max_f64(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub fn min_f64(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}

/// `true` when built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
