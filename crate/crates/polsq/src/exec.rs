//! Order-preserving map drivers: rayon when the `parallel` feature is on,
//! plain iteration otherwise.
//!
//! Every result vector is assembled in input index order, so parallelism
//! never changes output bytes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over items, parallel when the `parallel` feature is enabled.
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential reference path, available regardless of features.
pub fn map_ordered_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
