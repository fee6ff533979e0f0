//! Sequential/parallel switch for batch work. With the `parallel` feature
//! (default) batches run on the rayon pool once enabled at runtime; results
//! are identical either way, so outputs never depend on the thread count.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(false);

/// Enables or disables parallel batch execution. Without the `parallel`
/// feature this is a no-op and everything runs sequentially.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled && cfg!(feature = "parallel"), Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    PARALLEL.load(Ordering::Relaxed)
}

/// Configures the number of worker threads: `1` disables parallelism, larger
/// values enable it (the global pool is sized on first use).
pub fn configure_jobs(jobs: usize) {
    if jobs <= 1 {
        set_parallel(false);
        return;
    }
    #[cfg(feature = "parallel")]
    {
        // Ignore the error if a pool already exists; the pool size is a hint.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    set_parallel(true);
}

/// Order-preserving map over a batch, parallel when enabled.
pub fn map_batch<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        use rayon::prelude::*;
        // Keep chunks coarse so cheap per-item closures amortize the
        // scheduling overhead.
        let min_len = (items.len() / (4 * rayon::current_num_threads().max(1))).max(1);
        return items.par_iter().with_min_len(min_len).map(&f).collect();
    }
    items.iter().map(f).collect()
}
