//! Replica fan-out with a fixed reduction order.

use rayon::prelude::*;

use crate::error::{CliError, CliResult};

/// Runs `f(0..replicas)` on `workers` threads and returns results in replica
/// order, so downstream reductions do not depend on scheduling.
pub fn run_replicas<T, F>(replicas: usize, workers: usize, f: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> CliResult<T> + Sync,
{
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..replicas as u64).into_par_iter().map(&f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_workers() {
        let f = |r: u64| Ok(r * r);
        let one = run_replicas(100, 1, f).unwrap();
        let four = run_replicas(100, 4, f).unwrap();
        assert_eq!(one, four);
        assert_eq!(one[7], 49);
    }
}
