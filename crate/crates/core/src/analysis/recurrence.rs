//! Regular recurrence of the limit sequence along the periods `l_M`.

use crate::construction::{Symbol, Toeplitz};
use crate::error::{Error, Result};
use crate::parallel::{reduce_range, Jobs};
use crate::SeqIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecurrenceFailure {
    pub i: SeqIndex,
    pub t: i64,
    pub period: SeqIndex,
    pub expected: Symbol,
    pub found: Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub i_max: u64,
    pub t_lo: i64,
    pub t_hi: i64,
    /// Number of `(i, t)` pairs compared.
    pub checked: u64,
    /// Failure with the smallest `i` (then smallest `t`).
    pub first_failure: Option<RecurrenceFailure>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Recurrence period of position `i`: `l_{M(i)}` with
/// `M(i) = min{M ≥ 1 : l_{M−1} > |i|}`.
pub fn recurrence_period(t: &Toeplitz<'_>, i: SeqIndex) -> Result<SeqIndex> {
    let s = t.schedule();
    (1..=s.m_max())
        .find(|&m| s.length(m - 1) > i.abs())
        .map(|m| s.length(m))
        .ok_or_else(|| {
            Error::Capacity(format!(
                "no recurrence period for {i} within M_max = {}",
                s.m_max()
            ))
        })
}

/// Checks `b_{i + t·l_{M(i)}} = b_i` for all `|i| ≤ i_max`, `t ∈ [t_lo, t_hi]`.
pub fn toeplitz_recurrence_check(
    t: &Toeplitz<'_>,
    i_max: u64,
    t_lo: i64,
    t_hi: i64,
    jobs: Jobs,
) -> Result<RecurrenceReport> {
    if t_hi < t_lo {
        return Err(Error::Domain(format!("empty t range [{t_lo}, {t_hi}]")));
    }
    let i_max_idx = i_max as SeqIndex;
    let per_index = |i: SeqIndex| -> Result<(u64, Option<RecurrenceFailure>)> {
        let period = recurrence_period(t, i)?;
        let expected = t.limit_value(i)?;
        let mut checked = 0;
        for step in t_lo..=t_hi {
            let n = (step as SeqIndex)
                .checked_mul(period)
                .and_then(|d| d.checked_add(i))
                .ok_or_else(|| Error::Capacity(format!("{i} + {step}·{period} overflows")))?;
            let found = t.limit_value(n)?;
            checked += 1;
            if found != expected {
                return Ok((
                    checked,
                    Some(RecurrenceFailure {
                        i,
                        t: step,
                        period,
                        expected,
                        found,
                    }),
                ));
            }
        }
        Ok((checked, None))
    };
    let (checked, first_failure) = reduce_range(
        -i_max_idx,
        i_max_idx,
        jobs,
        (0u64, None),
        &per_index,
        |(c1, f1), (c2, f2)| (c1 + c2, f1.or(f2)),
    )?;
    Ok(RecurrenceReport {
        i_max,
        t_lo,
        t_hi,
        checked,
        first_failure,
    })
}
