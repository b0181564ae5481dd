//! Order-preserving parallel map over independent jobs.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Apply `f` to every item on `workers` threads (all cores if `None`).
/// Results come back in input order, so reductions over them are deterministic.
pub fn map_ordered<T, R, F>(workers: Option<usize>, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}
