//! Data-parallel map helpers. With the default `parallel` feature these run
//! on rayon; built with `--no-default-features` they degrade to plain
//! sequential loops with identical results.
//!
//! Every caller follows the same pattern: map independent work items to a
//! `Vec` (order preserved by index), then reduce sequentially in fixed order.
//! Output is therefore bitwise independent of the thread count.

/// Map `f` over `0..len`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..len).map(f).collect()
}

/// Cap the global worker count. `0` leaves the runtime default (one worker
/// per core). Has no effect once a pool exists, so call it before any
/// parallel work; without the `parallel` feature it is a no-op.
#[cfg(feature = "parallel")]
pub fn install_thread_cap(threads: usize) {
    if threads > 0 {
        // build_global errs if the pool was already initialized; keep going.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
pub fn install_thread_cap(_threads: usize) {}
