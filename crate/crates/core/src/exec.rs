//! Data-parallel map helpers with a sequential fallback.
//!
//! Both flavours return a `Vec` in input order. Reductions over that Vec
//! happen sequentially (pairwise/compensated), so results are bit-identical
//! whether the `parallel` feature is on, off, or rayon picks any thread
//! count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting in index order. Sequential, always
/// available (benchmarks compare it against the parallel flavour).
pub fn map_indexed_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Map `f` over `0..n` on the rayon pool, collecting in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed_par<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n` using the configured execution mode.
#[cfg(feature = "parallel")]
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    map_indexed_par(n, f)
}

/// Map `f` over `0..n` using the configured execution mode.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    map_indexed_seq(n, f)
}
