//! Literal window-copying construction over a finite range.
//!
//! Shares nothing with the lazy evaluator beyond the schedule lengths and
//! the base values; it exists to check [`Toeplitz::stage_value`].

use super::{Symbol, Toeplitz};
use crate::error::{Error, Result};
use crate::SeqIndex;

pub const DEFAULT_MATERIALIZE_ENTRIES: usize = 10_000_000;

/// `a^(M)` on `[lo, hi]`, built by materializing `a` and applying stages
/// `1..=M` as explicit copies.
pub fn materialize_stage_bruteforce(
    t: &Toeplitz<'_>,
    stage: usize,
    lo: SeqIndex,
    hi: SeqIndex,
) -> Result<Vec<Symbol>> {
    materialize_stage_capped(t, stage, lo, hi, DEFAULT_MATERIALIZE_ENTRIES)
}

pub fn materialize_stage_capped(
    t: &Toeplitz<'_>,
    stage: usize,
    lo: SeqIndex,
    hi: SeqIndex,
    max_entries: usize,
) -> Result<Vec<Symbol>> {
    let schedule = t.schedule();
    if stage > schedule.m_max() {
        return Err(Error::Capacity(format!(
            "stage {stage} beyond M_max = {}",
            schedule.m_max()
        )));
    }
    if hi < lo {
        return Err(Error::Domain(format!("empty range [{lo}, {hi}]")));
    }
    // The source block of every stage sits around the origin.
    let (r_lo, r_hi) = if stage >= 1 {
        let half = schedule.length(stage - 1);
        (lo.min(-half), hi.max(half - 1))
    } else {
        (lo, hi)
    };
    let size = r_hi - r_lo + 1;
    if size > max_entries as SeqIndex {
        return Err(Error::Capacity(format!(
            "materializing {size} entries exceeds the cap of {max_entries}"
        )));
    }
    let at = |n: SeqIndex| (n - r_lo) as usize;

    let mut seq = (r_lo..=r_hi)
        .map(|n| t.base_value(n))
        .collect::<Result<Vec<_>>>()?;

    if stage >= 1 {
        let l1 = schedule.length(1);
        let mut n = r_lo + (-r_lo).rem_euclid(l1);
        while n <= r_hi {
            seq[at(n)] = Symbol::Zero;
            n += l1;
        }
    }

    for m in 2..=stage {
        let (l, half) = (schedule.length(m), schedule.length(m - 1));
        let source = seq[at(-half)..=at(half - 1)].to_vec();
        let first = (r_lo - half).div_euclid(l);
        let last = (r_hi + half).div_euclid(l) + 1;
        for r in first..=last {
            let start = r * l - half;
            let end = r * l + half - 1;
            let (from, to) = (start.max(r_lo), end.min(r_hi));
            if from > to {
                continue;
            }
            let src = &source[(from - start) as usize..=(to - start) as usize];
            seq[at(from)..=at(to)].copy_from_slice(src);
        }
    }

    Ok(seq[at(lo)..=at(hi)].to_vec())
}
