//! Pairwise summation. Keeps accumulated roundoff at O(log n) ulps and, more
//! importantly here, makes every reduction order-independent of the thread
//! schedule: callers sum fixed-length slices, never streaming iterators.

use num_complex::Complex64 as C64;

const PAIRWISE_BASE: usize = 32;

pub fn pairwise_f64<T, F>(items: &[T], f: &F) -> f64
where
    F: Fn(&T) -> f64,
{
    if items.len() <= PAIRWISE_BASE {
        let mut acc = 0.0;
        for item in items {
            acc += f(item);
        }
        return acc;
    }
    let mid = items.len() / 2;
    pairwise_f64(&items[..mid], f) + pairwise_f64(&items[mid..], f)
}

/// `sum conj(f_j) g_j` over equal-length slices.
pub fn pairwise_dot_conj(f: &[C64], g: &[C64]) -> C64 {
    debug_assert_eq!(f.len(), g.len());
    if f.len() <= PAIRWISE_BASE {
        let mut acc = C64::new(0.0, 0.0);
        for (a, b) in f.iter().zip(g) {
            acc += a.conj() * b;
        }
        return acc;
    }
    let mid = f.len() / 2;
    pairwise_dot_conj(&f[..mid], &g[..mid]) + pairwise_dot_conj(&f[mid..], &g[mid..])
}
