//! Pointwise structural checks of the construction.

use crate::construction::materialize_stage_bruteforce;
use crate::construction::Toeplitz;
use crate::error::{Error, Result};
use crate::parallel::{map_range, reduce_range, Jobs};
use crate::SeqIndex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub n: SeqIndex,
    pub detail: String,
}

/// Outcome of a pointwise check over a range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub lo: SeqIndex,
    pub hi: SeqIndex,
    pub checked: u64,
    /// Failure at the smallest index.
    pub first_failure: Option<CheckFailure>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

type Partial = (u64, Option<CheckFailure>);

fn run_check<F>(name: String, lo: SeqIndex, hi: SeqIndex, jobs: Jobs, f: F) -> Result<CheckReport>
where
    F: Fn(SeqIndex) -> Result<Partial> + Sync,
{
    if hi < lo {
        return Err(Error::Domain(format!("empty range [{lo}, {hi}]")));
    }
    let (checked, first_failure) =
        reduce_range(lo, hi, jobs, (0, None), &f, |(c1, f1), (c2, f2)| {
            (c1 + c2, f1.or(f2))
        })?;
    Ok(CheckReport {
        name,
        lo,
        hi,
        checked,
        first_failure,
    })
}

fn fail(n: SeqIndex, detail: String) -> Partial {
    (1, Some(CheckFailure { n, detail }))
}

fn check_stage(t: &Toeplitz<'_>, stage: usize) -> Result<()> {
    if stage > t.schedule().m_max() {
        return Err(Error::Domain(format!(
            "stage {stage} beyond M_max = {}",
            t.schedule().m_max()
        )));
    }
    Ok(())
}

/// Lazy `a^(M)` against the literal window-copying materializer.
pub fn oracle_equivalence(
    t: &Toeplitz<'_>,
    stage: usize,
    lo: SeqIndex,
    hi: SeqIndex,
    jobs: Jobs,
) -> Result<CheckReport> {
    let oracle = materialize_stage_bruteforce(t, stage, lo, hi)?;
    let lazy = map_range(lo, hi, jobs, |n| t.stage_value(stage, n))?;
    let first_failure = oracle
        .iter()
        .zip(&lazy)
        .enumerate()
        .find(|(_, (a, b))| a != b)
        .map(|(i, (a, b))| CheckFailure {
            n: lo + i as SeqIndex,
            detail: format!("oracle {a}, lazy {b}"),
        });
    Ok(CheckReport {
        name: format!("oracle M={stage}"),
        lo,
        hi,
        checked: lazy.len() as u64,
        first_failure,
    })
}

/// `Σ_{m=0}^{M} c^(m)_n = a^(M)_n`.
pub fn decomposition_check(
    t: &Toeplitz<'_>,
    stage: usize,
    lo: SeqIndex,
    hi: SeqIndex,
    jobs: Jobs,
) -> Result<CheckReport> {
    check_stage(t, stage)?;
    run_check(format!("decomposition M={stage}"), lo, hi, jobs, |n| {
        let mut sum = 0i8;
        for m in 0..=stage {
            sum += t.component_value(m, stage, n)?.value();
        }
        let a = t.stage_value(stage, n)?.value();
        Ok(if sum == a {
            (1, None)
        } else {
            fail(n, format!("components sum to {sum}, a^({stage}) = {a}"))
        })
    })
}

/// `a^(M')_n = a^(M*)_n` for every `M' ≥ M*`, where `M*` is the least stage
/// with `l_{M*} > |n|`.
pub fn stabilization_check(t: &Toeplitz<'_>, n_max: u64, jobs: Jobs) -> Result<CheckReport> {
    let m_max = t.schedule().m_max();
    let bound = n_max as SeqIndex;
    run_check("stabilization".into(), -bound, bound, jobs, |n| {
        let first = t.limit_stage(n)?;
        let value = t.stage_value(first, n)?;
        for later in first + 1..=m_max {
            let v = t.stage_value(later, n)?;
            if v != value {
                return Ok(fail(n, format!("a^({first}) = {value}, a^({later}) = {v}")));
            }
        }
        Ok((1, None))
    })
}

/// Every `n ∈ D_m` with `m ≥ 2` satisfies `|n| ≥ l_m − l_{m−1}`.
pub fn difference_floor_check(
    t: &Toeplitz<'_>,
    m: usize,
    lo: SeqIndex,
    hi: SeqIndex,
    jobs: Jobs,
) -> Result<CheckReport> {
    if m < 2 {
        return Err(Error::Domain(
            "the difference-set floor applies from m = 2".into(),
        ));
    }
    check_stage(t, m)?;
    let floor = t.schedule().length(m) - t.schedule().length(m - 1);
    run_check(format!("difference floor m={m}"), lo, hi, jobs, |n| {
        Ok(if t.in_difference_set(m, n)? && n.abs() < floor {
            fail(n, format!("n ∈ D_{m} but |n| < {floor}"))
        } else {
            (1, None)
        })
    })
}

/// `c^(m)_n = c^(m)_{n + t·l_M}` for each shift in `shifts`.
pub fn component_periodicity_check(
    t: &Toeplitz<'_>,
    m: usize,
    stage: usize,
    lo: SeqIndex,
    hi: SeqIndex,
    shifts: &[i64],
    jobs: Jobs,
) -> Result<CheckReport> {
    check_stage(t, stage)?;
    if m == 0 || m > stage {
        return Err(Error::Domain(format!(
            "component m = {m} must lie in 1..={stage}"
        )));
    }
    let period = t.schedule().length(stage);
    run_check(format!("periodicity m={m} M={stage}"), lo, hi, jobs, |n| {
        let c = t.component_value(m, stage, n)?;
        for &s in shifts {
            let shifted = n + s as SeqIndex * period;
            let d = t.component_value(m, stage, shifted)?;
            if d != c {
                return Ok(fail(n, format!("c({n}) = {c}, c({shifted}) = {d}")));
            }
        }
        Ok((1, None))
    })
}
