//! Data-parallel building blocks.
//!
//! With the `parallel` feature these run on the rayon pool, otherwise they
//! fall back to plain iterators. Reductions always split the input into
//! fixed-size chunks and combine the partial results left to right, so the
//! floating-point result does not depend on the number of threads.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length for reductions.
pub const CHUNK: usize = 4096;

/// Sum of `f` over `values`, reduced chunk by chunk in a fixed order.
pub fn sum_by<F>(values: &[f64], f: F) -> f64
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let partial = |chunk: &[f64]| chunk.iter().map(|&v| f(v)).sum::<f64>();
    #[cfg(feature = "parallel")]
    let parts: Vec<f64> = values.par_chunks(CHUNK).map(partial).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<f64> = values.chunks(CHUNK).map(partial).collect();
    parts.into_iter().sum()
}

/// Two sums in one pass; `f` returns both summands.
pub fn sum2_by<F>(values: &[f64], f: F) -> (f64, f64)
where
    F: Fn(f64) -> (f64, f64) + Sync + Send,
{
    let partial = |chunk: &[f64]| {
        chunk.iter().fold((0.0, 0.0), |(a, b), &v| {
            let (x, y) = f(v);
            (a + x, b + y)
        })
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<(f64, f64)> = values.par_chunks(CHUNK).map(partial).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(f64, f64)> = values.chunks(CHUNK).map(partial).collect();
    parts
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y))
}

/// Maximum of `f` over `values` (0 for an empty slice).
pub fn max_by<F>(values: &[f64], f: F) -> f64
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let partial = |chunk: &[f64]| chunk.iter().map(|&v| f(v)).fold(0.0_f64, f64::max);
    #[cfg(feature = "parallel")]
    let parts: Vec<f64> = values.par_chunks(CHUNK).map(partial).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<f64> = values.chunks(CHUNK).map(partial).collect();
    parts.into_iter().fold(0.0, f64::max)
}

/// Elementwise map into a new vector.
pub fn map<F>(values: &[f64], f: F) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return values.par_iter().map(|&v| f(v)).collect();
    #[cfg(not(feature = "parallel"))]
    return values.iter().map(|&v| f(v)).collect();
}

/// Evaluates `f(0..len)` and collects in index order.
pub fn collect_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return (0..len).into_par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return (0..len).map(f).collect();
}

/// Applies `f` to each mutable chunk of length `chunk_len` together with its index.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(chunk_len)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
    #[cfg(not(feature = "parallel"))]
    data.chunks_mut(chunk_len)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
}
