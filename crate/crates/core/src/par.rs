//! Per-frequency map with a rayon backend and a sequential fallback.
//!
//! All grid evaluations in the crate funnel through [`map_indexed`]. The
//! `parallel` feature (on by default) enables the rayon path; [`Strategy`]
//! lets callers such as the benches pick a path at runtime.

/// Execution strategy for grid-wide maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

// Below this many points the thread-pool handoff costs more than it saves.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 64;

/// Evaluates `f(0..len)` and collects the results in index order.
pub fn map_indexed<T, F>(len: usize, strategy: Strategy, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel if len >= MIN_PARALLEL_LEN => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(f).collect()
        }
        _ => (0..len).map(f).collect(),
    }
}

/// Like [`map_indexed`] for fallible closures; returns the first error in index order.
pub fn try_map_indexed<T, E, F>(len: usize, strategy: Strategy, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_indexed(len, strategy, f).into_iter().collect()
}

/// Runs two closures, concurrently when the rayon backend is available.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}
