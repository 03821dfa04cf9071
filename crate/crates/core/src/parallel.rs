//! Worker-pool plumbing. Every scanner in this crate runs on whatever rayon
//! pool is current and sorts or order-preserves its output, so the worker
//! count never changes results.

use rayon::ThreadPoolBuilder;

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "SHIFTPOW_WORKERS";

/// Runs `f` on a dedicated pool of `workers` threads (at least one).
pub fn with_workers<T, F>(workers: usize, f: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let pool = ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("failed to build worker pool");
    pool.install(f)
}

/// Worker count from [`WORKERS_ENV`], falling back to available parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
