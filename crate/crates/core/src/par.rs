//! Data-parallel helpers. With the `parallel` feature these run on rayon;
//! without it they fall back to plain iterators. Output order is the input
//! order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_range<R: Send>(range: std::ops::Range<usize>, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R: Send>(range: std::ops::Range<usize>, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    range.map(f).collect()
}

/// First index (in range order) for which `f` returns `Some`.
#[cfg(feature = "parallel")]
pub fn find_first<R: Send>(
    range: std::ops::Range<u64>,
    f: impl Fn(u64) -> Option<R> + Sync + Send,
) -> Option<R> {
    range.into_par_iter().map(f).find_first(Option::is_some).flatten()
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<R: Send>(
    range: std::ops::Range<u64>,
    f: impl Fn(u64) -> Option<R> + Sync + Send,
) -> Option<R> {
    range.map(f).find(Option::is_some).flatten()
}

pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
