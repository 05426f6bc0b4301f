//! Data-parallel helpers. With the `parallel` feature disabled every helper
//! runs sequentially, and the `enabled` flag is ignored.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many elements the helpers never fan out.
pub const MIN_PARALLEL_LEN: usize = 1024;

#[cfg(feature = "parallel")]
#[inline]
fn fan_out(enabled: bool, len: usize) -> bool {
    enabled && len >= MIN_PARALLEL_LEN
}

/// `out[i] = f(i)` for every index.
#[cfg_attr(not(feature = "parallel"), allow(unused_variables))]
pub fn fill_indexed<T, F>(enabled: bool, out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if fan_out(enabled, out.len()) {
        out.par_iter_mut().enumerate().for_each(|(i, x)| *x = f(i));
        return;
    }
    out.iter_mut().enumerate().for_each(|(i, x)| *x = f(i));
}

/// Builds a vector of `len` elements from `f(i)`, short-circuiting on the first error.
#[cfg_attr(not(feature = "parallel"), allow(unused_variables))]
pub fn try_collect<T, E, F>(enabled: bool, len: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if fan_out(enabled, len) {
        return (0..len).into_par_iter().map(f).collect();
    }
    (0..len).map(f).collect()
}

/// Applies `f(i, a, b)` to paired elements of two equal-length slices.
#[cfg_attr(not(feature = "parallel"), allow(unused_variables))]
pub fn zip_for_each<A, B, F>(enabled: bool, a: &mut [A], b: &mut [B], f: F)
where
    A: Send,
    B: Send,
    F: Fn(usize, &mut A, &mut B) + Send + Sync,
{
    debug_assert_eq!(a.len(), b.len());
    #[cfg(feature = "parallel")]
    if fan_out(enabled, a.len()) {
        a.par_iter_mut()
            .zip(b.par_iter_mut())
            .enumerate()
            .for_each(|(i, (x, y))| f(i, x, y));
        return;
    }
    a.iter_mut()
        .zip(b.iter_mut())
        .enumerate()
        .for_each(|(i, (x, y))| f(i, x, y));
}

/// Runs two closures, concurrently when allowed.
#[cfg_attr(not(feature = "parallel"), allow(unused_variables))]
pub fn join<A, B, RA, RB>(enabled: bool, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if enabled {
        return rayon::join(a, b);
    }
    (a(), b())
}

/// Maps `f` over `0..len` and collects in order.
#[cfg_attr(not(feature = "parallel"), allow(unused_variables))]
pub fn map_collect<T, F>(enabled: bool, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if enabled {
        return (0..len).into_par_iter().map(f).collect();
    }
    (0..len).map(f).collect()
}
