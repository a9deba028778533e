//! Running independent jobs over a batch of inputs.
//!
//! With the `parallel` feature the jobs are spread over the rayon thread
//! pool; otherwise, and always through [`map_sequential`], they run in order
//! on the calling thread. Results keep the order of the inputs either way.

/// Applies `job` to every item, in parallel when the `parallel` feature is on.
pub fn map<T, R, F>(items: &[T], job: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(job).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, job)
    }
}

pub fn map_sequential<T, R, F>(items: &[T], job: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(job).collect()
}

/// Runs `job` on a pool of exactly `jobs` threads, or on the global pool
/// when `jobs` is 0. Sequential builds ignore `jobs`.
pub fn map_with_jobs<T, R, F>(items: &[T], jobs: usize, job: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if jobs == 0 {
            return map(items, job);
        }
        if jobs > 1 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(|| map(items, job));
            }
        }
    }
    let _ = jobs;
    map_sequential(items, job)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let xs: Vec<u64> = (0..100).collect();
        let sq = |x: &u64| x * x;
        assert_eq!(map(&xs, sq), map_sequential(&xs, sq));
        assert_eq!(map_with_jobs(&xs, 3, sq), map_sequential(&xs, sq));
    }
}
