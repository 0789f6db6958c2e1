//! Data-parallel map with a sequential fallback.
//!
//! Output order always follows input order, so callers get the same result
//! whichever path runs.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map_ordered<T, U, F>(items: &[T], parallel: bool, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel && items.len() > 1 {
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Whether a parallel path was compiled in.
pub const fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}
