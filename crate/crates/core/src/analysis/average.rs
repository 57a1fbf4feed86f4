//! Cesàro averages with exact integer numerators.

use num_complex::{Complex, Complex64};

use super::weight::WeightFunction;
use crate::construction::{Level, Source, SymbolSequence, Toeplitz};
use crate::error::{Error, Result};
use crate::numtheory::{exact_sqrt, ArithFn, MobiusSieve};
use crate::parallel::{reduce_range, sum_range, Jobs};
use crate::SeqIndex;

/// `numerator / count`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactAverage {
    pub numerator: i128,
    pub count: u64,
}

impl ExactAverage {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.count as f64
    }
}

/// `(1/N) Σ b(ω)_{n²} ω(n)`. The numerator is exact for Gaussian-integer
/// weights; otherwise `error_bound` bounds the floating-point error of
/// `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedAverage {
    pub count: u64,
    pub numerator: Option<Complex<i128>>,
    pub value: Complex64,
    pub error_bound: f64,
}

impl WeightedAverage {
    /// Real numerator for real-valued exact weights.
    pub fn real_numerator(&self) -> Option<i128> {
        self.numerator.filter(|z| z.im == 0).map(|z| z.re)
    }
}

/// Averages reported together at one `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageReport {
    pub n: u64,
    pub weight: ArithFn,
    /// `(1/N) Σ b(ω)_{n²} ω(n)`.
    pub s1: WeightedAverage,
    /// `(1/N) Σ μ(n) b(ω)_n`.
    pub s2: ExactAverage,
    /// `(1/N) Σ μ(n)²`.
    pub baseline: ExactAverage,
}

fn check_count(n: u64) -> Result<SeqIndex> {
    if n == 0 {
        return Err(Error::Domain("averages need N ≥ 1".into()));
    }
    Ok(n as SeqIndex)
}

/// Largest `N` whose squares the schedule reaches: `N² < l_{M_max}`.
pub fn max_square_average_n(t: &Toeplitz<'_>) -> u64 {
    let reach = t.schedule().length(t.schedule().m_max()) as u128;
    let n = (reach - 1).isqrt();
    n.min(t.sieve().limit() as u128) as u64
}

fn square_capacity(t: &Toeplitz<'_>, n: u64) -> Result<()> {
    let feasible = max_square_average_n(t);
    if n > feasible {
        return Err(Error::Capacity(format!(
            "N = {n} exceeds the maximal feasible N = {feasible} for this schedule and sieve"
        )));
    }
    Ok(())
}

/// `b(ω)_{k²}`: trace `k²` through the construction and apply `ω` to the
/// root of the base index it lands on.
fn square_symbol<W: WeightFunction + ?Sized, T>(
    t: &Toeplitz<'_>,
    weight: &W,
    k: SeqIndex,
    eval: impl Fn(&W, &MobiusSieve, SeqIndex) -> Result<T>,
) -> Result<Option<T>> {
    match t.limit_source(k * k)? {
        Source::Zeroed => Ok(None),
        Source::Base(idx) => match exact_sqrt(idx) {
            Some(root) => eval(weight, t.sieve(), root as SeqIndex).map(Some),
            None => Ok(None),
        },
    }
}

/// `(1/N) Σ_{n≤N} b(ω)_{n²} ω(n)`, where `b(ω)` is the construction with
/// `ω` on the squares of the base sequence. For `ω = μ` this is the
/// average of `b_{n²} μ(n)`.
pub fn weighted_square_average<W: WeightFunction + ?Sized>(
    t: &Toeplitz<'_>,
    weight: &W,
    n: u64,
    jobs: Jobs,
) -> Result<WeightedAverage> {
    let hi = check_count(n)?;
    square_capacity(t, n)?;
    if weight.is_exact() {
        let term = |k: SeqIndex| -> Result<Complex<i128>> {
            let b = square_symbol(t, weight, k, |w, s, r| w.exact(s, r))?.flatten();
            let Some(b) = b else {
                return Ok(Complex::new(0, 0));
            };
            let w = weight.exact(t.sieve(), k)?.ok_or_else(|| {
                Error::Domain(format!("weight {} not exact at {k}", weight.name()))
            })?;
            let p = b * w;
            Ok(Complex::new(p.re as i128, p.im as i128))
        };
        let num = reduce_range(1, hi, jobs, Complex::new(0i128, 0), &term, |a, b| a + b)?;
        return Ok(WeightedAverage {
            count: n,
            numerator: Some(num),
            value: Complex64::new(num.re as f64 / n as f64, num.im as f64 / n as f64),
            error_bound: 0.0,
        });
    }

    let term = |k: SeqIndex| -> Result<Compensated> {
        let mut acc = Compensated::default();
        if let Some(b) = square_symbol(t, weight, k, |w, s, r| w.value(s, r))? {
            acc.add(b * weight.value(t.sieve(), k)?);
        }
        Ok(acc)
    };
    let sum = reduce_range(
        1,
        hi,
        jobs,
        Compensated::default(),
        &term,
        Compensated::merge,
    )?;
    let total = sum.total();
    Ok(WeightedAverage {
        count: n,
        numerator: None,
        value: total / n as f64,
        error_bound: 4.0 * f64::EPSILON * sum.abs_sum / n as f64,
    })
}

/// `(1/N) Σ_{n≤N} μ(n) b_n` for the limit sequence of `t`.
pub fn mobius_average(t: &Toeplitz<'_>, n: u64, jobs: Jobs) -> Result<ExactAverage> {
    let hi = check_count(n)?;
    if hi > t.sieve().limit() as SeqIndex {
        return Err(Error::Capacity(format!(
            "N = {n} exceeds the sieve limit {}",
            t.sieve().limit()
        )));
    }
    let b = t.sequence(Level::Limit);
    let numerator = sum_range(1, hi, jobs, |k| {
        let mu = t.sieve().mobius(k)?;
        if mu == 0 {
            return Ok(0);
        }
        Ok((mu * b.symbol_at(k)?.value()) as i128)
    })?;
    Ok(ExactAverage {
        numerator,
        count: n,
    })
}

/// `(1/N) Σ_{n≤N} μ(n)²`.
pub fn baseline_squarefree(sieve: &MobiusSieve, n: u64) -> Result<ExactAverage> {
    check_count(n)?;
    Ok(ExactAverage {
        numerator: sieve.squarefree_count(n)? as i128,
        count: n,
    })
}

/// S1, S2 and the squarefree baseline at one `N`, all built from the
/// sequence with `weight` on the squares.
pub fn average_report(
    t: &Toeplitz<'_>,
    weight: ArithFn,
    n: u64,
    jobs: Jobs,
) -> Result<AverageReport> {
    let rebuilt = t.with_base(weight);
    Ok(AverageReport {
        n,
        weight,
        s1: weighted_square_average(&rebuilt, &weight, n, jobs)?,
        s2: mobius_average(&rebuilt, n, jobs)?,
        baseline: baseline_squarefree(t.sieve(), n)?,
    })
}

/// Neumaier-compensated complex sum.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    re: (f64, f64),
    im: (f64, f64),
    abs_sum: f64,
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl Compensated {
    fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
        self.abs_sum += z.norm();
    }

    fn merge(mut self, other: Compensated) -> Compensated {
        neumaier(&mut self.re, other.re.0);
        neumaier(&mut self.re, other.re.1);
        neumaier(&mut self.im, other.im.0);
        neumaier(&mut self.im, other.im.1);
        self.abs_sum += other.abs_sum;
        self
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}
