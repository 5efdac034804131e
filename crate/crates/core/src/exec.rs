//! Deterministic batch evaluation, parallel when the `parallel` feature is on.
//!
//! Every batch job in this crate is an indexed map: evaluate a pure function
//! at indices `0..n` and collect the results in index order. That shape makes
//! the parallel and sequential paths produce identical outputs, so the
//! feature flag only changes wall-clock time, never bytes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, collecting results in index order.
///
/// Runs on the rayon pool when the `parallel` feature is enabled and
/// sequentially otherwise.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential twin of [`map_indexed`], always single-threaded.
///
/// Kept unconditionally so benchmarks can compare both paths in one build.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Derives an independent stream seed from a base seed and a task index.
///
/// SplitMix64 finalizer applied twice; tasks with distinct indices get
/// decorrelated seeds and the derivation is stable across platforms.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed).wrapping_add(splitmix64(index ^ 0x9e37_79b9_7f4a_7c15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sums a set of addends independently of their input order.
///
/// Sorts by total order before accumulating, so any permutation of the same
/// multiset gives bit-identical results. Used where permutation invariance
/// must hold exactly, e.g. ensemble averages.
pub fn stable_sum(terms: &[f64]) -> f64 {
    let mut sorted = terms.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().sum()
}
