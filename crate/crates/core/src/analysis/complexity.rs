//! Word complexity sampled over finite windows.
//!
//! Counts over a window are lower bounds for the true complexity of the
//! two-sided sequence, so they are only ever compared against upper
//! bounds. Words up to 64 symbols are keyed exactly (2 bits per symbol);
//! longer words are keyed by a 122-bit polynomial fingerprint. A
//! fingerprint collision can only merge two words, so the counts remain
//! lower bounds.

use std::collections::HashSet;

use super::poly::{poly_beta, PolySpec};
use crate::construction::{Level, Symbol, SymbolSequence, Toeplitz};
use crate::error::{Error, Result};
use crate::parallel::{map_range, Jobs};
use crate::SeqIndex;

/// Cap on the number of distinct words held in memory.
pub const DEFAULT_WORD_CAP: usize = 10_000_000;

/// Longest word length counted with sliding windows in
/// [`sequential_ratio_report`]; longer words are counted aligned.
pub const SLIDING_WORD_LIMIT: u64 = 1 << 12;

/// `Q(m) = m² + 2m`, the polynomial bound on the complexity of `a`.
pub fn quadratic_bound(m: u64) -> u128 {
    let m = m as u128;
    m * m + 2 * m
}

/// `(m + 1)·Q(m)²`, the bound on the complexity of `b`.
pub fn toeplitz_bound(m: u64) -> u128 {
    (m as u128 + 1) * quadratic_bound(m).pow(2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityReport {
    pub m: u64,
    pub lo: SeqIndex,
    pub hi: SeqIndex,
    /// Distinct words starting anywhere in the window.
    pub sampled_p: u64,
    /// Distinct words starting at multiples of `m`.
    pub aligned_p: u64,
    pub bound: u128,
}

fn code(s: Symbol) -> u64 {
    match s {
        Symbol::Zero => 0,
        Symbol::Plus => 1,
        Symbol::Minus => 2,
    }
}

const P61: u64 = (1 << 61) - 1;
const BASES: [u64; 2] = [0x1F3D_5B79_2A4C_6E81 % P61, 0x0B1E_9C3A_7D5F_2468 % P61];

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P61 as u128) as u64
}

/// Keys of every length-`m` word of `symbols`, in start order.
fn word_keys(symbols: &[Symbol], m: usize) -> Vec<u128> {
    if symbols.len() < m || m == 0 {
        return Vec::new();
    }
    let count = symbols.len() - m + 1;
    let mut keys = Vec::with_capacity(count);
    if m <= 64 {
        let mask = if m == 64 {
            u128::MAX
        } else {
            (1u128 << (2 * m)) - 1
        };
        let mut key = 0u128;
        for (i, &s) in symbols.iter().enumerate() {
            key = ((key << 2) | code(s) as u128) & mask;
            if i + 1 >= m {
                keys.push(key);
            }
        }
        return keys;
    }
    // Rolling hash over codes shifted to 1..=3 so that zeros still count.
    let top: Vec<u64> = BASES
        .iter()
        .map(|&b| (0..m - 1).fold(1u64, |acc, _| mulmod(acc, b)))
        .collect();
    let mut h = [0u64; 2];
    for (i, &s) in symbols.iter().enumerate() {
        let c = code(s) + 1;
        for j in 0..2 {
            if i >= m {
                let out = mulmod(code(symbols[i - m]) + 1, top[j]);
                h[j] = (h[j] + P61 - out) % P61;
            }
            h[j] = (mulmod(h[j], BASES[j]) + c) % P61;
        }
        if i + 1 >= m {
            keys.push(((h[0] as u128) << 64) | h[1] as u128);
        }
    }
    keys
}

/// Counts sliding and aligned words of length `m` in a materialized window
/// starting at index `lo`.
pub fn count_words(symbols: &[Symbol], lo: SeqIndex, m: u64, cap: usize) -> Result<(u64, u64)> {
    if m == 0 {
        return Err(Error::Domain("word length must be at least 1".into()));
    }
    if (symbols.len() as u64) < m {
        return Err(Error::Domain(format!(
            "window of {} symbols is shorter than the word length {m}",
            symbols.len()
        )));
    }
    let keys = word_keys(symbols, m as usize);
    let mut sliding = HashSet::new();
    let mut aligned = HashSet::new();
    for (offset, key) in keys.into_iter().enumerate() {
        let start = lo + offset as SeqIndex;
        if start.rem_euclid(m as SeqIndex) == 0 {
            aligned.insert(key);
        }
        sliding.insert(key);
        if sliding.len() > cap {
            return Err(Error::Capacity(format!(
                "more than {cap} distinct words of length {m}"
            )));
        }
    }
    Ok((sliding.len() as u64, aligned.len() as u64))
}

fn materialize(
    seq: &dyn SymbolSequence,
    lo: SeqIndex,
    hi: SeqIndex,
    jobs: Jobs,
) -> Result<Vec<Symbol>> {
    if hi < lo {
        return Err(Error::Domain(format!("empty window [{lo}, {hi}]")));
    }
    map_range(lo, hi, jobs, |n| seq.symbol_at(n))
}

/// Distinct `m`-words of `seq` within `[lo, hi]`.
pub fn sampled_complexity(
    seq: &dyn SymbolSequence,
    m: u64,
    lo: SeqIndex,
    hi: SeqIndex,
    jobs: Jobs,
) -> Result<ComplexityReport> {
    let symbols = materialize(seq, lo, hi, jobs)?;
    let (sampled_p, aligned_p) = count_words(&symbols, lo, m, DEFAULT_WORD_CAP)?;
    Ok(ComplexityReport {
        m,
        lo,
        hi,
        sampled_p,
        aligned_p,
        bound: toeplitz_bound(m),
    })
}

/// One row of the complexity check for `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRow {
    pub report: ComplexityReport,
    /// `log p / m` with the sampled count.
    pub log_rate: f64,
}

impl EntropyRow {
    pub fn passed(&self) -> bool {
        self.report.sampled_p as u128 <= self.report.bound
    }
}

/// Sampled complexity of `b` against `(m + 1)·Q(m)²` for each `m`.
pub fn entropy_bound_check(
    t: &Toeplitz<'_>,
    m_list: &[u64],
    lo: SeqIndex,
    hi: SeqIndex,
    jobs: Jobs,
) -> Result<Vec<EntropyRow>> {
    let symbols = materialize(&t.sequence(Level::Limit), lo, hi, jobs)?;
    m_list
        .iter()
        .map(|&m| {
            let (sampled_p, aligned_p) = count_words(&symbols, lo, m, DEFAULT_WORD_CAP)?;
            Ok(EntropyRow {
                log_rate: (sampled_p as f64).ln() / m as f64,
                report: ComplexityReport {
                    m,
                    lo,
                    hi,
                    sampled_p,
                    aligned_p,
                    bound: toeplitz_bound(m),
                },
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequentialRatioRow {
    pub stage: usize,
    pub length: u64,
    pub beta: u128,
    pub sampled_p: u64,
    pub aligned: bool,
    /// `log p_b(l_M) / β_P(l_M)`.
    pub ratio: f64,
}

/// `log p_b(l_M) / β_P(l_M)` for each requested stage, with `p_b` sampled
/// over `[lo, hi]`.
pub fn sequential_ratio_report(
    t: &Toeplitz<'_>,
    poly: &PolySpec,
    stages: &[usize],
    lo: SeqIndex,
    hi: SeqIndex,
    jobs: Jobs,
) -> Result<Vec<SequentialRatioRow>> {
    let symbols = materialize(&t.sequence(Level::Limit), lo, hi, jobs)?;
    stages
        .iter()
        .map(|&stage| {
            if stage == 0 || stage > t.schedule().m_max() {
                return Err(Error::Domain(format!(
                    "stage {stage} outside 1..={}",
                    t.schedule().m_max()
                )));
            }
            let length = u64::try_from(t.schedule().length(stage))
                .map_err(|_| Error::Capacity(format!("l_{stage} is too long to sample")))?;
            let (sliding, aligned_count) = count_words(&symbols, lo, length, DEFAULT_WORD_CAP)?;
            let aligned = length > SLIDING_WORD_LIMIT;
            let sampled_p = if aligned { aligned_count } else { sliding };
            let beta = poly_beta(poly, length as u128)?;
            Ok(SequentialRatioRow {
                stage,
                length,
                beta,
                sampled_p,
                aligned,
                ratio: (sampled_p as f64).ln() / beta as f64,
            })
        })
        .collect()
}
