//! Data-parallel loops over index ranges.
//!
//! With the `parallel` feature the loops run on the rayon pool; otherwise
//! (or with [`Exec::Sequential`]) they run on the calling thread. Results
//! never depend on the mode or the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Minimum of `f(state, i)` over `0..count`, tie-broken by smallest `i`.
pub fn min_by<S, I, F, K>(exec: Exec, count: u64, init: I, f: F) -> Option<(K, u64)>
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> K + Sync + Send,
    K: Ord + Send + Copy,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..count)
            .into_par_iter()
            .map_init(&init, |s, i| (f(s, i), i))
            .min(),
        _ => {
            let mut s = init();
            (0..count).map(|i| (f(&mut s, i), i)).min()
        }
    }
}

/// Histogram of `f(state, i) < bins` over `0..count`.
pub fn histogram<S, I, F>(exec: Exec, count: u64, bins: usize, init: I, f: F) -> Vec<u128>
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> usize + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..count)
            .into_par_iter()
            .fold(
                || (init(), vec![0u128; bins]),
                |(mut s, mut h), i| {
                    h[f(&mut s, i)] += 1;
                    (s, h)
                },
            )
            .map(|(_, h)| h)
            .reduce(
                || vec![0u128; bins],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            ),
        _ => {
            let mut s = init();
            let mut h = vec![0u128; bins];
            for i in 0..count {
                h[f(&mut s, i)] += 1;
            }
            h
        }
    }
}

/// Smallest `i` in `0..count` with `pred(state, i)`.
pub fn find_first<S, I, F>(exec: Exec, count: u64, init: I, pred: F) -> Option<u64>
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> bool + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..count)
            .into_par_iter()
            .map_init(&init, |s, i| (i, pred(s, i)))
            .find_first(|&(_, hit)| hit)
            .map(|(i, _)| i),
        _ => {
            let mut s = init();
            (0..count).find(|&i| pred(&mut s, i))
        }
    }
}

/// `f(i)` for each `i` in `0..count`, in order.
pub fn map_collect<T, F>(exec: Exec, count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..count).into_par_iter().map(f).collect(),
        _ => (0..count).map(f).collect(),
    }
}
