//! Worker pool for the embarrassingly parallel sweeps.
//!
//! The pool size comes from `VLA_THREADS` when it is set to a positive
//! integer, and from rayon's default otherwise.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("VLA_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            builder = builder.num_threads(n);
        }
        builder.build().expect("thread pool construction")
    })
}

/// Runs `f` inside the engine's pool, so nested parallel iterators use it.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    pool().install(f)
}

pub fn threads() -> usize {
    pool().current_num_threads()
}
