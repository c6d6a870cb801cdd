//! Data-parallel helper compiled to rayon or plain iterators by the
//! `parallel` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over a slice, returning results in input order. Because the
/// output order is fixed, any reduction performed on the returned vector is
/// deterministic regardless of how many worker threads ran the map.
#[cfg(feature = "parallel")]
pub(crate) fn ordered_map<'a, T, R, F>(items: &'a [T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&'a T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn ordered_map<'a, T, R, F>(items: &'a [T], f: F) -> Vec<R>
where
    F: Fn(&'a T) -> R,
{
    items.iter().map(f).collect()
}
