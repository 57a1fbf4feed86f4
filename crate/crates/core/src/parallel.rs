//! Deterministic map-reduce over index ranges.
//!
//! Ranges are cut into fixed-size chunks independent of the worker count;
//! each chunk yields an exact integer partial and partials are combined in
//! chunk order, so results never depend on the degree of parallelism.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::SeqIndex;

const CHUNK: SeqIndex = 1 << 15;

/// Degree of parallelism; `0` means one worker per available core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Jobs(pub usize);

impl Jobs {
    fn pool(self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.0)
            .build()
            .map_err(|e| Error::Capacity(format!("cannot start worker pool: {e}")))
    }
}

/// Sums `f(n)` over `lo..=hi` with exact integer arithmetic.
pub fn sum_range<F>(lo: SeqIndex, hi: SeqIndex, jobs: Jobs, f: F) -> Result<i128>
where
    F: Fn(SeqIndex) -> Result<i128> + Sync,
{
    reduce_range(lo, hi, jobs, 0i128, &f, |a, b| a + b)
}

/// Folds `f` over `lo..=hi` into a per-chunk accumulator, then combines the
/// chunks left to right.
pub fn reduce_range<T, F, C>(
    lo: SeqIndex,
    hi: SeqIndex,
    jobs: Jobs,
    zero: T,
    f: &F,
    combine: C,
) -> Result<T>
where
    T: Clone + Send + Sync,
    F: Fn(SeqIndex) -> Result<T> + Sync,
    C: Fn(T, T) -> T + Sync,
{
    if hi < lo {
        return Ok(zero);
    }
    let chunks = ((hi - lo) / CHUNK + 1) as usize;
    let partials: Vec<Result<T>> = jobs.pool()?.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = lo + c as SeqIndex * CHUNK;
                let end = (start + CHUNK - 1).min(hi);
                let mut acc = zero.clone();
                for n in start..=end {
                    acc = combine(acc, f(n)?);
                }
                Ok(acc)
            })
            .collect()
    });
    partials
        .into_iter()
        .try_fold(zero, |acc, p| Ok(combine(acc, p?)))
}

/// Evaluates `f` on `lo..=hi`, preserving order.
pub fn map_range<T, F>(lo: SeqIndex, hi: SeqIndex, jobs: Jobs, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(SeqIndex) -> Result<T> + Sync,
{
    if hi < lo {
        return Ok(Vec::new());
    }
    let len = usize::try_from(hi - lo + 1)
        .map_err(|_| Error::Capacity(format!("range [{lo}, {hi}] is too long to materialize")))?;
    jobs.pool()?.install(|| {
        (0..len)
            .into_par_iter()
            .map(|i| f(lo + i as SeqIndex))
            .collect()
    })
}
