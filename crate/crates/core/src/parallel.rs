//! Order-preserving fan-out over independent work items.
//!
//! With the `parallel` feature the items run on a rayon pool sized by the
//! caller; without it, or with one worker, they run inline. Results always
//! come back in index order.

use crate::error::Result;

pub fn map_indexed<T, F>(n: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers != 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| crate::error::Error::Config(format!("thread pool: {e}")))?;
        return pool.install(|| (0..n).into_par_iter().map(&f).collect());
    }
    let _ = workers;
    (0..n).map(f).collect()
}

/// Whether this build can run work items concurrently.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
