//! Data-parallel helpers. Without the `parallel` feature every mode runs
//! sequentially; results are identical either way.

/// How batch operations are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Sequential,
    Parallel,
}

impl Execution {
    /// `Parallel` when the crate was built with rayon, else `Sequential`.
    pub fn best() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub(crate) fn map<T, R, F>(mode: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Execution::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Smallest index in `0..n` for which `f` returns `Some`.
pub(crate) fn first_failure<E, F>(mode: Execution, n: usize, f: F) -> Option<(usize, E)>
where
    E: Send,
    F: Fn(usize) -> Option<E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Execution::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().find_map_first(|i| f(i).map(|e| (i, e)));
    }
    let _ = mode;
    (0..n).find_map(|i| f(i).map(|e| (i, e)))
}
