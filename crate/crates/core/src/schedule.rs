//! The parameter tower `(ε_i, n_i, l_i = 2^{n_i})` driving the construction.
//!
//! Tolerances are exact rationals, so every admissibility constraint
//! (including the one involving `log₂ ε_i`) is decided without rounding.

use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SeqIndex;

/// Largest admissible period exponent: `l = 2^n` and indices of magnitude
/// up to a few multiples of `l` must fit in a [`SeqIndex`].
pub const MAX_EXPONENT: u32 = 125;

/// Validated or unvalidated tower of tolerances and period exponents.
///
/// Construction through [`ParamSchedule::from_parts`] checks only the
/// shape; [`validate_schedule`] reports constraint violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSchedule {
    epsilons: Vec<BigRational>,
    exponents: Vec<u32>,
}

/// Which admissibility constraint a schedule breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `ε_i > 0`.
    PositiveTolerance,
    /// `ε_i < ε_{i−1} / 2`.
    StrictHalving,
    /// `n_0 = 0`.
    BaseExponent,
    /// `n_i > 2 n_{i−1}`.
    ExponentDoubling,
    /// `n_i > n_{i−1} + 2 − log₂ ε_i`.
    ExponentTolerance,
    /// `4 l_{i−1} / l_i ≤ ε_i`.
    PeriodRatio,
    /// `l_{i−1} < l_i / 2`, so windows around distinct multiples of `l_i`
    /// never overlap.
    WindowSeparation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub constraint: Constraint,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "i={}: {:?}: {}",
            self.index, self.constraint, self.detail
        )
    }
}

fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `⌊log₂ x⌋` for a positive rational.
fn floor_log2(x: &BigRational) -> i64 {
    debug_assert!(x.is_positive());
    let mut t = x.numer().bits() as i64 - x.denom().bits() as i64;
    if *x < pow2(t) {
        t -= 1;
    }
    t
}

/// Parses `"a/b"`, an integer or a plain decimal such as `"0.125"`.
pub fn parse_rational(raw: &str) -> Result<BigRational> {
    let raw = raw.trim();
    let bad = || Error::Parse(format!("cannot parse '{raw}' as a rational number"));
    if let Some((num, den)) = raw.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Domain(format!("zero denominator in '{raw}'")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (int_part, frac_part) = raw.split_once('.').unwrap_or((raw, ""));
    if frac_part.chars().any(|c| !c.is_ascii_digit())
        || (int_part.is_empty() && frac_part.is_empty())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits == "-" || digits == "+" {
        return Err(bad());
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(numer, denom))
}

/// `ε_i = ε₀·3^{−i}` and `n_i = ⌊max{2n_{i−1}, n_{i−1} + 2 − log₂ ε_i}⌋ + 1`.
pub fn generate_schedule(epsilon0: &BigRational, m_max: usize) -> Result<ParamSchedule> {
    if !epsilon0.is_positive() || *epsilon0 > BigRational::one() {
        return Err(Error::Domain(format!(
            "epsilon0 must satisfy 0 < epsilon0 ≤ 1, got {epsilon0}"
        )));
    }
    if m_max == 0 {
        return Err(Error::Domain(
            "the number of stages must be at least 1".into(),
        ));
    }
    let three = BigRational::from_integer(BigInt::from(3));
    let mut epsilons = vec![epsilon0.clone()];
    let mut exponents = vec![0u32];
    for i in 1..=m_max {
        let eps = &epsilons[i - 1] / &three;
        let prev = exponents[i - 1] as i64;
        let tolerance_floor = prev + 2 + floor_log2(&eps.recip());
        let next = (2 * prev).max(tolerance_floor) + 1;
        if next > MAX_EXPONENT as i64 {
            return Err(Error::Capacity(format!(
                "stage {i} needs period 2^{next}, beyond the 2^{MAX_EXPONENT} index capacity"
            )));
        }
        epsilons.push(eps);
        exponents.push(next as u32);
    }
    Ok(ParamSchedule {
        epsilons,
        exponents,
    })
}

/// Lists every constraint the schedule breaks; empty iff admissible.
pub fn validate_schedule(s: &ParamSchedule) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |index, constraint, detail: String| {
        out.push(Violation {
            index,
            constraint,
            detail,
        })
    };
    if s.exponents[0] != 0 {
        push(
            0,
            Constraint::BaseExponent,
            format!("n_0 = {}", s.exponents[0]),
        );
    }
    for (i, eps) in s.epsilons.iter().enumerate() {
        if !eps.is_positive() {
            push(i, Constraint::PositiveTolerance, format!("ε_{i} = {eps}"));
        }
    }
    let two = BigRational::from_integer(BigInt::from(2));
    for i in 1..s.exponents.len() {
        let (eps, prev_eps) = (&s.epsilons[i], &s.epsilons[i - 1]);
        let (n, prev) = (s.exponents[i] as i64, s.exponents[i - 1] as i64);
        if eps * &two >= *prev_eps {
            push(
                i,
                Constraint::StrictHalving,
                format!(
                    "ε_{i} = {eps} is not < ε_{} / 2 = {}",
                    i - 1,
                    prev_eps / &two
                ),
            );
        }
        if n <= 2 * prev {
            push(
                i,
                Constraint::ExponentDoubling,
                format!("n_{i} = {n} ≤ 2·n_{} = {}", i - 1, 2 * prev),
            );
        }
        if eps.is_positive() && eps * pow2(n - prev - 2) <= BigRational::one() {
            push(
                i,
                Constraint::ExponentTolerance,
                format!(
                    "n_{i} = {n} ≤ n_{} + 2 − log₂ ε_{i} with ε_{i} = {eps}",
                    i - 1
                ),
            );
        }
        if pow2(prev + 2 - n) > *eps {
            push(
                i,
                Constraint::PeriodRatio,
                format!("4·l_{}/l_{i} = 2^{} > ε_{i} = {eps}", i - 1, prev + 2 - n),
            );
        }
        if n < prev + 2 {
            push(
                i,
                Constraint::WindowSeparation,
                format!("l_{} ≥ l_{i}/2", i - 1),
            );
        }
    }
    out
}

impl ParamSchedule {
    /// Assembles a schedule from explicit tolerances and exponents. Checks
    /// lengths and capacity only.
    pub fn from_parts(epsilons: Vec<BigRational>, exponents: Vec<u32>) -> Result<Self> {
        if epsilons.len() != exponents.len() || exponents.len() < 2 {
            return Err(Error::Schedule(format!(
                "need matching tolerance and exponent lists with at least two entries, got {} and {}",
                epsilons.len(),
                exponents.len()
            )));
        }
        if let Some(&n) = exponents.iter().find(|&&n| n > MAX_EXPONENT) {
            return Err(Error::Capacity(format!(
                "exponent {n} exceeds the index capacity 2^{MAX_EXPONENT}"
            )));
        }
        Ok(ParamSchedule {
            epsilons,
            exponents,
        })
    }

    /// `ε₀ = 1/2` with five stages: `n = (0, 5, 12, 25, 51, 103)`.
    pub fn default_tower() -> Self {
        generate_schedule(&BigRational::new(1.into(), 2.into()), 5)
            .expect("default schedule is admissible")
    }

    /// Errors with every violation listed unless the schedule is admissible.
    pub fn validated(self) -> Result<Self> {
        let violations = validate_schedule(&self);
        if violations.is_empty() {
            return Ok(self);
        }
        let joined: Vec<String> = violations.iter().map(ToString::to_string).collect();
        Err(Error::Schedule(joined.join("; ")))
    }

    pub fn m_max(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn epsilon0(&self) -> &BigRational {
        &self.epsilons[0]
    }

    pub fn epsilon(&self, i: usize) -> &BigRational {
        &self.epsilons[i]
    }

    pub fn epsilons(&self) -> &[BigRational] {
        &self.epsilons
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exponents[i]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `l_i = 2^{n_i}`.
    pub fn length(&self, i: usize) -> SeqIndex {
        1 << self.exponents[i]
    }

    /// `Σ_{m ∈ range} ε_m`.
    pub fn epsilon_sum(&self, range: std::ops::Range<usize>) -> BigRational {
        self.epsilons[range]
            .iter()
            .fold(BigRational::zero(), |acc, e| acc + e)
    }

    /// Smallest stage `M` with `l_M > |n|`, if the schedule reaches that far.
    pub fn stabilization_stage(&self, n: SeqIndex) -> Option<usize> {
        let mag = n.unsigned_abs();
        (0..=self.m_max()).find(|&m| (1u128 << self.exponents[m]) > mag)
    }

    /// `K_M`: the largest multiple of `2^{n_{M−1}}` strictly below
    /// `√(2^{n_M} − 2^{n_{M−1}})`.
    pub fn k_bound(&self, m: usize) -> Result<SeqIndex> {
        if m == 0 || m > self.m_max() {
            return Err(Error::Domain(format!(
                "K_M needs 1 ≤ M ≤ {}, got {m}",
                self.m_max()
            )));
        }
        let step = 1u128 << self.exponents[m - 1];
        let target = (1u128 << self.exponents[m]) - step;
        // k² < target  ⇔  k ≤ isqrt(target − 1)
        let k = (target - 1).isqrt() / step * step;
        if k == 0 {
            return Err(Error::Schedule(format!(
                "no positive multiple of 2^{} lies below √(2^{} − 2^{})",
                self.exponents[m - 1],
                self.exponents[m],
                self.exponents[m - 1]
            )));
        }
        Ok(k as SeqIndex)
    }

    /// `h_M(n)`: the digit of `n` at position `M` of the mixed-radix
    /// expansion `n = Σ h_M(n)·2^{n_M}`, `0 ≤ h_M(n) < 2^{n_{M+1} − n_M}`.
    pub fn digit(&self, n: SeqIndex, m: usize) -> Result<u128> {
        if n < 0 {
            return Err(Error::Domain(format!(
                "digits are defined for n ≥ 0, got {n}"
            )));
        }
        if m >= self.m_max() {
            return Err(Error::Domain(format!(
                "digit position {m} must be below M_max = {}",
                self.m_max()
            )));
        }
        let width = self.exponents[m + 1] - self.exponents[m];
        Ok(((n as u128) >> self.exponents[m]) & ((1u128 << width) - 1))
    }

    /// Digits `h_0(n), …, h_{M_max−1}(n)`; `n` must be below `l_{M_max}`.
    pub fn digits(&self, n: SeqIndex) -> Result<Vec<u128>> {
        if n >= self.length(self.m_max()) {
            return Err(Error::Capacity(format!(
                "{n} has no expansion below l_{}",
                self.m_max()
            )));
        }
        (0..self.m_max()).map(|m| self.digit(n, m)).collect()
    }

    pub fn to_toml(&self) -> Result<String> {
        let pair = |r: &BigRational| -> Result<[i64; 2]> {
            match (r.numer().to_i64(), r.denom().to_i64()) {
                (Some(n), Some(d)) => Ok([n, d]),
                _ => Err(Error::Capacity(format!(
                    "tolerance {r} does not fit a 64-bit pair"
                ))),
            }
        };
        let file = ScheduleFile {
            epsilon0: pair(&self.epsilons[0])?,
            m_max: self.m_max(),
            epsilons: self.epsilons.iter().map(pair).collect::<Result<_>>()?,
            exponents: self.exponents.clone(),
        };
        toml::to_string(&file).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ScheduleFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let ratio = |[n, d]: [i64; 2]| -> Result<BigRational> {
            if d == 0 {
                return Err(Error::Parse("zero denominator in schedule file".into()));
            }
            Ok(BigRational::new(n.into(), d.into()))
        };
        let epsilons: Vec<BigRational> = file
            .epsilons
            .into_iter()
            .map(ratio)
            .collect::<Result<_>>()?;
        if epsilons.first() != Some(&ratio(file.epsilon0)?) {
            return Err(Error::Schedule("epsilon0 differs from epsilons[0]".into()));
        }
        if file.m_max + 1 != epsilons.len() {
            return Err(Error::Schedule(format!(
                "M_max = {} but {} tolerances listed",
                file.m_max,
                epsilons.len()
            )));
        }
        ParamSchedule::from_parts(epsilons, file.exponents)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }
}

#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    epsilon0: [i64; 2],
    #[serde(rename = "M_max")]
    m_max: usize,
    epsilons: Vec<[i64; 2]>,
    exponents: Vec<u32>,
}
