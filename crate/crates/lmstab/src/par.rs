//! Data-parallel helpers. With the default `parallel` feature the maps run on
//! rayon; without it everything falls back to sequential iteration. Outputs
//! are ordered by input index either way, so results are identical.

/// Sequential map, always available (benchmarks compare against it).
pub fn map_seq<T, U>(items: Vec<T>, f: impl Fn(T) -> U) -> Vec<U> {
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T: Send, U: Send>(items: Vec<T>, f: impl Fn(T) -> U + Send + Sync) -> Vec<U> {
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

/// Feature-dispatched map: rayon when `parallel` is enabled, sequential otherwise.
#[cfg(feature = "parallel")]
pub fn map_maybe_par<T: Send, U: Send>(items: Vec<T>, f: impl Fn(T) -> U + Send + Sync) -> Vec<U> {
    map_par(items, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map_maybe_par<T: Send, U: Send>(items: Vec<T>, f: impl Fn(T) -> U + Send + Sync) -> Vec<U> {
    map_seq(items, f)
}

/// Runs `f` on a pool of `jobs` threads when the parallel feature is on;
/// `jobs = 0` means the default pool size.
#[cfg(feature = "parallel")]
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
            .install(f)
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_jobs<R: Send>(_jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_preserved() {
        let v: Vec<u64> = (0..100).collect();
        let seq = map_seq(v.clone(), |x| x * x);
        let par = map_maybe_par(v, |x| x * x);
        assert_eq!(seq, par);
    }
}
