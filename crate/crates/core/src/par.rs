//! Data-parallel kernels with a sequential fallback.
//!
//! The heavy inner loops of the crate (operator assembly over tensor-power
//! bases, per-column certificate sweeps, seeded verification batches) are
//! embarrassingly parallel maps over an index range. With the `parallel`
//! feature the maps run on rayon and collect in index order, so results are
//! bit-identical to the sequential path; without the feature only the
//! sequential path is compiled.

/// Sequential map over `0..n`, kept unconditionally for benchmarks and for
/// bit-identity tests against the parallel path.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indexed_par<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map over `0..n`, parallel when the feature is on and the range is worth
/// splitting. Output order is always `0..n`.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if n >= 64 {
            return map_indexed_par(n, f);
        }
    }
    map_indexed_seq(n, f)
}

/// True iff `f` holds for every index in `0..n`; short-circuits in both modes.
pub fn all_indexed<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if n >= 64 {
            use rayon::prelude::*;
            return (0..n).into_par_iter().all(f);
        }
    }
    (0..n).all(f)
}

/// First index in `0..n` failing `f`, scanning in order (deterministic even
/// under parallel execution: candidates are collected and the minimum taken).
pub fn first_failure<F>(n: usize, f: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if n >= 64 {
            use rayon::prelude::*;
            return (0..n).into_par_iter().filter(|i| !f(*i)).min();
        }
    }
    (0..n).find(|i| !f(*i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_matches_seq() {
        let f = |i: usize| i * i + 1;
        let a = map_indexed_seq(1000, f);
        let b = map_indexed(1000, f);
        assert_eq!(a, b);
        assert_eq!(first_failure(1000, |i| i != 517), Some(517));
        assert!(all_indexed(1000, |i| i < 1000));
    }
}
