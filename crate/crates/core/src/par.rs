//! Data-parallel primitives with a sequential fallback.
//!
//! With the `parallel` feature (default) these run on the rayon global pool;
//! without it they are plain loops. Results are identical either way: maps
//! preserve index order and reductions break ties on the lower index.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Grid points per rayon task in [`argmin_indexed`].
#[cfg(feature = "parallel")]
const CHUNK: usize = 1 << 14;

/// `(0..n).map(f).collect()`, evaluated in parallel when enabled.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_seq(n, f)
    }
}

/// Always-sequential [`map_indexed`].
pub fn map_indexed_seq<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Maps every item of `items` through `f`, preserving order.
pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
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

fn better(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    // NaN never wins; equal values keep the lower index
    if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) || a.1.is_nan() {
        b
    } else {
        a
    }
}

fn argmin_range<F: Fn(usize) -> f64>(range: std::ops::Range<usize>, f: &F) -> (usize, f64) {
    range.fold((usize::MAX, f64::NAN), |best, i| better(best, (i, f(i))))
}

/// Index and value of the smallest `f(i)` for `i in 0..n`.
pub fn argmin_indexed<F>(n: usize, f: F) -> (usize, f64)
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        let chunks = n.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| argmin_range(c * CHUNK..((c + 1) * CHUNK).min(n), &f))
            .reduce(|| (usize::MAX, f64::NAN), better)
    }
    #[cfg(not(feature = "parallel"))]
    {
        argmin_indexed_seq(n, f)
    }
}

/// Always-sequential [`argmin_indexed`].
pub fn argmin_indexed_seq<F: Fn(usize) -> f64>(n: usize, f: F) -> (usize, f64) {
    argmin_range(0..n, &f)
}
