//! Deterministic range partitioning for exact sums.
//!
//! A rank space `0..total` is cut into contiguous ranges, each range is
//! summed by one worker and the partial sums are added back in range order.
//! Addition of rationals is exact, so the result never depends on the
//! number of workers.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Below this many terms the pool setup costs more than it saves.
const SEQUENTIAL_CUTOFF: u128 = 2048;
const CHUNKS_PER_THREAD: u128 = 4;

/// Execution knobs shared by every enumeration-heavy operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecConfig {
    pub threads: usize,
    /// Hard cap on the number of terms any single sum may visit.
    pub term_budget: u64,
}

pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            term_budget: DEFAULT_TERM_BUDGET,
        }
    }
}

impl ExecConfig {
    pub fn with_threads(threads: usize) -> Self {
        ExecConfig {
            threads: threads.max(1),
            ..ExecConfig::default()
        }
    }

    pub fn check_budget(&self, terms: Option<u128>) -> Result<u128> {
        match terms {
            Some(t) if t <= u128::from(self.term_budget) => Ok(t),
            _ => Err(Error::BudgetExceeded {
                terms,
                budget: self.term_budget,
            }),
        }
    }
}

/// Contiguous `(start, len)` ranges covering `0..total`.
pub fn partition(total: u128, pieces: u128) -> Vec<(u128, u128)> {
    let pieces = pieces.clamp(1, total.max(1));
    let base = total / pieces;
    let extra = total % pieces;
    let mut start = 0;
    (0..pieces)
        .map(|i| {
            let len = base + u128::from(i < extra);
            let range = (start, len);
            start += len;
            range
        })
        .collect()
}

/// Evaluates `work(start, len)` on a partition of `0..total`, returning the
/// results in range order. Small jobs run inline on the calling thread.
pub fn map_ranges<T, F>(total: u128, config: &ExecConfig, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u128, u128) -> Result<T> + Sync,
{
    if config.threads <= 1 || total < SEQUENTIAL_CUTOFF {
        return Ok(vec![work(0, total)?]);
    }
    let ranges = partition(total, config.threads as u128 * CHUNKS_PER_THREAD);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| {
        ranges
            .par_iter()
            .map(|&(start, len)| work(start, len))
            .collect()
    })
}

/// Sums `range_sum(start, len)` over a partition of `0..total`.
pub fn sum_ranges<F>(total: u128, config: &ExecConfig, range_sum: F) -> Result<Rational>
where
    F: Fn(u128, u128) -> Result<Rational> + Sync,
{
    Ok(map_ranges(total, config, range_sum)?
        .into_iter()
        .fold(Rational::zero(), |acc, part| acc + part))
}
