//! Parallel trajectory ensembles.
//!
//! Trajectory `i` draws its noise from stream `i` of the base seed, and
//! results come back in index order, so ensemble averages do not depend on
//! the thread count.

use rayon::prelude::*;

/// Overrides the worker count.
pub const THREADS_ENV: &str = "CONTOMECH_THREADS";

pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Run `f(0..n)` on a pool of [`thread_count`] workers and collect the
/// results in trajectory order; the first error wins.
pub fn run<T, E, F>(n: u64, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(u64) -> Result<T, E> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .expect("thread pool");
    pool.install(|| (0..n).into_par_iter().map(&f).collect())
}
