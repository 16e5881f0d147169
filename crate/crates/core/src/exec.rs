//! Data-parallel fan-out used by stage branches, per-page asset generation,
//! and batch evaluation.
//!
//! With the `parallel` feature (default) work runs on a dedicated rayon pool
//! sized by the worker bound; without it, or with a bound of 1, everything
//! runs sequentially. Both paths preserve input order, so parallel and
//! serial execution produce identical results for deterministic work.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Bounded worker set. Cheap to clone handles are not needed; build one per
/// run and pass it by reference.
pub struct Workers {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
    count: usize,
}

impl Workers {
    pub fn new(count: usize) -> Self {
        let count = count.max(1);
        #[cfg(feature = "parallel")]
        {
            let pool = if count > 1 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(count)
                    .thread_name(|i| format!("storypipe-worker-{i}"))
                    .build()
                    .ok()
            } else {
                None
            };
            Workers { pool, count }
        }
        #[cfg(not(feature = "parallel"))]
        {
            Workers { count }
        }
    }

    /// Effective worker bound (1 means sequential).
    pub fn count(&self) -> usize {
        #[cfg(feature = "parallel")]
        {
            if self.pool.is_some() {
                return self.count;
            }
        }
        1
    }

    /// Applies `f` to every item, returning results in input order.
    pub fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            return pool.install(|| items.into_par_iter().map(f).collect());
        }
        items.into_iter().map(f).collect()
    }

    /// Runs independent closures, returning their results in input order.
    pub fn run_all<R: Send>(&self, tasks: Vec<Box<dyn FnOnce() -> R + Send + '_>>) -> Vec<R> {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            return pool.install(|| tasks.into_par_iter().map(|task| task()).collect());
        }
        tasks.into_iter().map(|task| task()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let workers = Workers::new(4);
        let out = workers.map((0..100).collect::<Vec<i32>>(), |x| x * 2);
        assert_eq!(out, (0..100).map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn serial_and_parallel_agree() {
        let serial = Workers::new(1);
        let parallel = Workers::new(4);
        let items: Vec<u64> = (0..257).collect();
        let f = |x: u64| x.wrapping_mul(0x9e3779b97f4a7c15).rotate_left(17);
        assert_eq!(serial.map(items.clone(), f), parallel.map(items, f));
    }

    #[test]
    fn run_all_preserves_order() {
        let workers = Workers::new(3);
        let tasks: Vec<Box<dyn FnOnce() -> usize + Send>> = (0..7)
            .map(|i| Box::new(move || i * i) as Box<dyn FnOnce() -> usize + Send>)
            .collect();
        assert_eq!(workers.run_all(tasks), vec![0, 1, 4, 9, 16, 25, 36]);
    }
}
