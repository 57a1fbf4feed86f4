//! Discrepancy between consecutive stages and against the base sequence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::average::ExactAverage;
use crate::construction::Toeplitz;
use crate::error::{Error, Result};
use crate::parallel::{sum_range, Jobs};
use crate::SeqIndex;

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn exact_ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Density of squares `k² ≤ K_M²` that fall in `D_1 ∪ … ∪ D_{M−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub stage: usize,
    pub k_m: u64,
    pub count: u64,
    /// `½ Σ_{m=1}^{M−1} ε_m`.
    pub bound: BigRational,
    /// `½ Σ_{m=1}^{M−1} ε_{m−1}`, the weaker form reached at the end of the
    /// counting argument.
    pub proof_bound: BigRational,
}

impl DiscrepancyReport {
    pub fn ratio_exact(&self) -> BigRational {
        exact_ratio(self.count, self.k_m)
    }

    pub fn ratio(&self) -> f64 {
        self.count as f64 / self.k_m as f64
    }

    pub fn bound_f64(&self) -> f64 {
        ratio_f64(&self.bound)
    }

    pub fn proof_bound_f64(&self) -> f64 {
        ratio_f64(&self.proof_bound)
    }

    /// Strict inequality `ratio < bound`, decided exactly.
    pub fn passed(&self) -> bool {
        self.ratio_exact() < self.bound
    }
}

fn check_stage(t: &Toeplitz<'_>, stage: usize, min: usize) -> Result<()> {
    let m_max = t.schedule().m_max();
    if stage < min || stage > m_max {
        return Err(Error::Domain(format!(
            "stage M = {stage} must lie in {min}..={m_max}"
        )));
    }
    Ok(())
}

/// Whether `k²` lies in some `D_m`, `1 ≤ m < stage`.
fn square_in_earlier_difference(t: &Toeplitz<'_>, stage: usize, k: SeqIndex) -> Result<bool> {
    let n = k * k;
    let mut prev = t.stage_value(0, n)?;
    for m in 1..stage {
        let cur = t.stage_value(m, n)?;
        if cur != prev {
            return Ok(true);
        }
        prev = cur;
    }
    Ok(false)
}

/// `#{k ≤ K_M : k² ∈ ∪_{m<M} D_m}` by direct membership tests.
pub fn discrepancy_ratio(t: &Toeplitz<'_>, stage: usize, jobs: Jobs) -> Result<DiscrepancyReport> {
    check_stage(t, stage, 2)?;
    let k_m = t.schedule().k_bound(stage)?;
    if k_m > t.sieve().limit() as SeqIndex {
        return Err(Error::Capacity(format!(
            "K_{stage} = {k_m} exceeds the sieve limit {}",
            t.sieve().limit()
        )));
    }
    let count = sum_range(1, k_m, jobs, |k| {
        square_in_earlier_difference(t, stage, k).map(i128::from)
    })? as u64;
    let half = BigRational::new(1.into(), 2.into());
    Ok(DiscrepancyReport {
        stage,
        k_m: k_m as u64,
        count,
        bound: t.schedule().epsilon_sum(1..stage) * &half,
        proof_bound: t.schedule().epsilon_sum(0..stage - 1) * &half,
    })
}

/// `|S1(K_M) − baseline(K_M)| ≤ 2·count_M / K_M`, term by term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AverageGap {
    pub stage: usize,
    pub k_m: u64,
    pub s1_numerator: i128,
    pub baseline_numerator: i128,
    pub count: u64,
}

impl AverageGap {
    pub fn passed(&self) -> bool {
        (self.s1_numerator - self.baseline_numerator).abs() <= 2 * self.count as i128
    }
}

pub fn average_gap(t: &Toeplitz<'_>, stage: usize, jobs: Jobs) -> Result<AverageGap> {
    let report = discrepancy_ratio(t, stage, jobs)?;
    let s1 = super::average::weighted_square_average(t, &t.base(), report.k_m, jobs)?;
    let baseline = super::average::baseline_squarefree(t.sieve(), report.k_m)?;
    Ok(AverageGap {
        stage,
        k_m: report.k_m,
        s1_numerator: s1
            .real_numerator()
            .ok_or_else(|| Error::Domain("average gap needs a real exact weight".into()))?,
        baseline_numerator: baseline.numerator,
        count: report.count,
    })
}

/// `(1/N) Σ_{n≤N} |a^(M)_n − a^(M−1)_n|` against `ε_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    pub stage: usize,
    pub n: u64,
    pub total: u64,
    pub epsilon: BigRational,
}

impl DistanceReport {
    pub fn value(&self) -> f64 {
        self.total as f64 / self.n as f64
    }

    pub fn passed(&self) -> bool {
        exact_ratio(self.total, self.n) < self.epsilon
    }
}

pub fn stage_distance(
    t: &Toeplitz<'_>,
    stage: usize,
    n: u64,
    jobs: Jobs,
) -> Result<DistanceReport> {
    check_stage(t, stage, 1)?;
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let total = sum_range(1, n as SeqIndex, jobs, |k| {
        let d = t.stage_value(stage, k)?.value() - t.stage_value(stage - 1, k)?.value();
        Ok(d.unsigned_abs() as i128)
    })? as u64;
    Ok(DistanceReport {
        stage,
        n,
        total,
        epsilon: t.schedule().epsilon(stage).clone(),
    })
}

/// `(1/N) Σ_{n≤N} μ(n) c^(m)_n`, the correlation of `μ` with one component
/// of `a^(M)`.
pub fn periodic_weight_average(
    t: &Toeplitz<'_>,
    m: usize,
    stage: usize,
    n: u64,
    jobs: Jobs,
) -> Result<ExactAverage> {
    check_stage(t, stage, 0)?;
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let numerator = sum_range(1, n as SeqIndex, jobs, |k| {
        let mu = t.sieve().mobius(k)?;
        if mu == 0 {
            return Ok(0);
        }
        Ok((mu * t.component_value(m, stage, k)?.value()) as i128)
    })?;
    Ok(ExactAverage {
        numerator,
        count: n,
    })
}
