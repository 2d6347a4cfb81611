//! Trial execution: rayon data parallelism with a sequential fallback.
//!
//! Trials are indexed, and each derives its own generator from the index,
//! so results do not depend on scheduling.

/// How trials are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Runs on the rayon pool; sequential when the `parallel` feature is off.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `f(0), ..., f(n - 1)` in index order.
pub fn map_trials<T, F>(exec: Execution, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(f).collect(),
        Execution::Parallel => parallel_map(n, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: u64| i.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 7;
        assert_eq!(
            map_trials(Execution::Sequential, 1000, f),
            map_trials(Execution::Parallel, 1000, f)
        );
    }
}
