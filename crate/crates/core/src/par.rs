//! Order-preserving map over independent grid points.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! the work out over the rayon pool; without it, every execution mode runs
//! on the calling thread. Output order always matches input order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Whether this build can actually run [`Execution::Parallel`] work
    /// concurrently.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `f(0), f(1), …, f(n−1)`, in that order.
pub fn map_indexed<T, F>(n: usize, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}
