//! Deterministic parallel execution.
//!
//! Every estimator in this module reduces a large family of row sums. Rows
//! are always evaluated in a fixed index order (each row summed sequentially
//! left to right) and combined with a fixed pairwise reduction tree, so the
//! result is bit-identical for every thread width. With the `parallel`
//! feature the row map runs on a rayon pool sized to the requested width;
//! without it, or at width 1, it runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Requested parallelism width. `0` means "use all available cores".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parallelism {
    width: usize,
}

impl Parallelism {
    pub fn new(width: usize) -> Self {
        Parallelism { width }
    }

    pub fn single() -> Self {
        Parallelism { width: 1 }
    }

    /// Resolved width (number of worker threads the executor will use).
    pub fn resolved_width(&self) -> usize {
        if self.width == 0 {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        } else {
            self.width
        }
    }
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism { width: 0 }
    }
}

/// Executor owning an optional thread pool.
pub struct Executor {
    width: usize,
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    pub fn new(par: Parallelism) -> Self {
        let width = par.resolved_width();
        #[cfg(feature = "parallel")]
        {
            let pool = if width > 1 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(width)
                    .build()
                    .ok()
            } else {
                None
            };
            Executor { width, pool }
        }
        #[cfg(not(feature = "parallel"))]
        {
            Executor { width }
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Evaluate `f(0), ..., f(n-1)` preserving index order.
    pub fn map_collect<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            return pool.install(|| (0..n).into_par_iter().map(f).collect());
        }
        (0..n).map(f).collect()
    }

    /// Row-parallel sum: pairwise reduction of the ordered row values.
    pub fn map_sum<F>(&self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        pairwise_sum(&self.map_collect(n, f))
    }
}

/// Fixed-tree pairwise sum; a pure function of the slice contents.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_produce_identical_bits() {
        let f = |i: usize| ((i as f64) * 0.3).sin() / ((i + 1) as f64);
        let seq = Executor::new(Parallelism::single()).map_sum(100_000, f);
        for w in [2, 3, 8] {
            let par = Executor::new(Parallelism::new(w)).map_sum(100_000, f);
            assert_eq!(seq.to_bits(), par.to_bits(), "width {w}");
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_closely() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }
}
