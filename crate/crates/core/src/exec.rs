//! Execution strategy for data-parallel loops.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] runs on the rayon
//! global pool. Without it every strategy runs sequentially. Results never
//! depend on the strategy: every helper here returns values in index order
//! and reductions are over integers or are performed after collection.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this strategy actually fans out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// `(0..len).map(f).collect()`, in index order.
pub fn map_indexed<T, F>(exec: Exec, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Number of indices in `0..len` for which `pred` holds.
pub fn count_indexed<F>(exec: Exec, len: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().filter(|&i| pred(i)).count() as u64;
    }
    let _ = exec;
    (0..len).filter(|&i| pred(i)).count() as u64
}

/// Evaluate `f` on the cartesian product `xs × ys`, row-major (x outer).
pub fn grid_map<T, F>(exec: Exec, xs: &[f64], ys: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64, f64) -> T + Sync + Send,
{
    let ny = ys.len();
    map_indexed(exec, xs.len() * ny, |k| f(xs[k / ny], ys[k % ny]))
}
