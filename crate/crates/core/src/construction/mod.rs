//! The base sequence `a`, the stages `a^(M)`, the Toeplitz limit `b` and
//! the component sequences `c^(m)`.
//!
//! Evaluation is lazy. An index is traced from stage `M` down to the base
//! sequence: at every stage `m ≥ 2` whose window around a multiple of `l_m`
//! contains it, the index is replaced by its centered residue modulo `l_m`;
//! stage 1 zeroes the multiples of `l_1`. What is left is a base index.

mod oracle;

pub use oracle::{
    materialize_stage_bruteforce, materialize_stage_capped, DEFAULT_MATERIALIZE_ENTRIES,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::numtheory::{exact_sqrt, ArithFn, MobiusSieve};
use crate::schedule::{validate_schedule, ParamSchedule};
use crate::SeqIndex;

/// A value in `{−1, 0, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[repr(i8)]
pub enum Symbol {
    Minus = -1,
    #[default]
    Zero = 0,
    Plus = 1,
}

impl Symbol {
    pub fn value(self) -> i8 {
        self as i8
    }

    pub fn from_i8(v: i8) -> Result<Symbol> {
        match v {
            -1 => Ok(Symbol::Minus),
            0 => Ok(Symbol::Zero),
            1 => Ok(Symbol::Plus),
            _ => Err(Error::Domain(format!(
                "{v} is not a symbol in {{-1, 0, 1}}"
            ))),
        }
    }

    pub fn is_zero(self) -> bool {
        self == Symbol::Zero
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Anything that can be sampled index by index.
pub trait SymbolSequence: Sync {
    fn symbol_at(&self, n: SeqIndex) -> Result<Symbol>;
}

impl<F> SymbolSequence for F
where
    F: Fn(SeqIndex) -> Result<Symbol> + Sync,
{
    fn symbol_at(&self, n: SeqIndex) -> Result<Symbol> {
        self(n)
    }
}

/// `j ≡ n (mod l)` with `j ∈ [−l/2, l/2)`.
pub fn centered_residue(n: SeqIndex, l: SeqIndex) -> SeqIndex {
    debug_assert!(l >= 2);
    let r = n.rem_euclid(l);
    if r >= l / 2 {
        r - l
    } else {
        r
    }
}

/// `a_n = μ(k)` when `n = k²` with `k ≥ 1`, otherwise 0.
pub fn base_value(sieve: &MobiusSieve, n: SeqIndex) -> Result<Symbol> {
    weighted_base_value(sieve, ArithFn::Mobius, n)
}

fn weighted_base_value(sieve: &MobiusSieve, base: ArithFn, n: SeqIndex) -> Result<Symbol> {
    match exact_sqrt(n) {
        Some(k) => {
            let k = SeqIndex::try_from(k).map_err(|_| Error::Range {
                index: SeqIndex::MAX,
                limit: sieve.limit(),
            })?;
            Symbol::from_i8(base.eval(sieve, k)?)
        }
        None => Ok(Symbol::Zero),
    }
}

/// Where a stage value comes from after tracing through the windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Zeroed by stage 1 (the multiples of `l_1`).
    Zeroed,
    /// Copied from this index of the base sequence.
    Base(SeqIndex),
}

/// Which sequence of the construction to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// The base sequence `a`.
    Base,
    /// The stage `a^(M)`; `Stage(0)` coincides with `Base`.
    Stage(usize),
    /// The Toeplitz limit `b`.
    Limit,
}

/// The construction over a validated schedule and a sieve.
#[derive(Debug, Clone, Copy)]
pub struct Toeplitz<'a> {
    schedule: &'a ParamSchedule,
    sieve: &'a MobiusSieve,
    base: ArithFn,
}

impl<'a> Toeplitz<'a> {
    /// Rejects schedules with any constraint violation, in particular
    /// overlapping windows.
    pub fn new(schedule: &'a ParamSchedule, sieve: &'a MobiusSieve) -> Result<Self> {
        let violations = validate_schedule(schedule);
        if let Some(v) = violations.first() {
            return Err(Error::Schedule(format!(
                "{v} ({} violation(s) in total)",
                violations.len()
            )));
        }
        Ok(Toeplitz {
            schedule,
            sieve,
            base: ArithFn::Mobius,
        })
    }

    /// Replaces `μ` on the squares by another arithmetic function.
    pub fn with_base(mut self, base: ArithFn) -> Self {
        self.base = base;
        self
    }

    pub fn schedule(&self) -> &'a ParamSchedule {
        self.schedule
    }

    pub fn sieve(&self) -> &'a MobiusSieve {
        self.sieve
    }

    pub fn base(&self) -> ArithFn {
        self.base
    }

    fn check_stage(&self, stage: usize) -> Result<()> {
        if stage > self.schedule.m_max() {
            return Err(Error::Capacity(format!(
                "stage {stage} beyond the schedule's M_max = {}",
                self.schedule.m_max()
            )));
        }
        Ok(())
    }

    pub fn base_value(&self, n: SeqIndex) -> Result<Symbol> {
        weighted_base_value(self.sieve, self.base, n)
    }

    /// Traces `n` through stages `stage, stage−1, …, 1`.
    pub fn resolve(&self, stage: usize, n: SeqIndex) -> Result<Source> {
        self.check_stage(stage)?;
        let mut idx = n;
        for m in (2..=stage).rev() {
            let half = self.schedule.length(m - 1);
            let j = centered_residue(idx, self.schedule.length(m));
            if (-half..half).contains(&j) {
                idx = j;
            }
        }
        if stage >= 1 && idx.rem_euclid(self.schedule.length(1)) == 0 {
            return Ok(Source::Zeroed);
        }
        Ok(Source::Base(idx))
    }

    /// The index held after each stage `stage, stage−1, …, 2` of
    /// [`Toeplitz::resolve`], paired with the stage number.
    pub fn resolve_trace(&self, stage: usize, n: SeqIndex) -> Result<Vec<(usize, SeqIndex)>> {
        self.check_stage(stage)?;
        let mut idx = n;
        let mut steps = Vec::new();
        for m in (2..=stage).rev() {
            let half = self.schedule.length(m - 1);
            let j = centered_residue(idx, self.schedule.length(m));
            if (-half..half).contains(&j) {
                idx = j;
            }
            steps.push((m, idx));
        }
        Ok(steps)
    }

    /// `a^(M)_n`.
    pub fn stage_value(&self, stage: usize, n: SeqIndex) -> Result<Symbol> {
        match self.resolve(stage, n)? {
            Source::Zeroed => Ok(Symbol::Zero),
            Source::Base(idx) => self.base_value(idx),
        }
    }

    /// The stage after which `n` never changes: the least `M` with
    /// `l_M > |n|`.
    pub fn limit_stage(&self, n: SeqIndex) -> Result<usize> {
        self.schedule.stabilization_stage(n).ok_or_else(|| {
            Error::Capacity(format!(
                "|{n}| ≥ l_{} = 2^{}; the schedule does not reach this index",
                self.schedule.m_max(),
                self.schedule.exponent(self.schedule.m_max())
            ))
        })
    }

    /// `b_n`.
    pub fn limit_value(&self, n: SeqIndex) -> Result<Symbol> {
        self.stage_value(self.limit_stage(n)?, n)
    }

    /// Source index of `b_n`.
    pub fn limit_source(&self, n: SeqIndex) -> Result<Source> {
        self.resolve(self.limit_stage(n)?, n)
    }

    /// Whether `n` lies in a stage-`m` window: `l_1ℤ` for `m = 1`, and
    /// `[r l_m − l_{m−1}, r l_m + l_{m−1} − 1]` for `m ≥ 2`.
    pub fn in_window(&self, m: usize, n: SeqIndex) -> bool {
        match m {
            0 => false,
            1 => n.rem_euclid(self.schedule.length(1)) == 0,
            _ => {
                let half = self.schedule.length(m - 1);
                (-half..half).contains(&centered_residue(n, self.schedule.length(m)))
            }
        }
    }

    /// `c^(m)_n` for the decomposition `a^(M) = Σ_{m=0}^{M} c^(m)`.
    pub fn component_value(&self, m: usize, stage: usize, n: SeqIndex) -> Result<Symbol> {
        self.check_stage(stage)?;
        if m > stage {
            return Err(Error::Domain(format!(
                "component {m} exceeds stage {stage}"
            )));
        }
        if m == 0 {
            if (1..=stage).any(|s| self.in_window(s, n)) {
                return Ok(Symbol::Zero);
            }
            return self.base_value(n);
        }
        if self.in_window(m, n) && !(1..m).any(|s| self.in_window(s, n)) {
            return self.stage_value(m, n);
        }
        Ok(Symbol::Zero)
    }

    /// Membership in `D_m = {n : a^(m−1)_n ≠ a^(m)_n}`.
    pub fn in_difference_set(&self, m: usize, n: SeqIndex) -> Result<bool> {
        if m == 0 {
            return Err(Error::Domain("difference sets start at m = 1".into()));
        }
        self.check_stage(m)?;
        Ok(self.stage_value(m - 1, n)? != self.stage_value(m, n)?)
    }

    pub fn sequence(&self, level: Level) -> StageSequence<'_> {
        StageSequence {
            toeplitz: self,
            level,
        }
    }
}

/// One level of the construction viewed as a sequence.
#[derive(Debug, Clone, Copy)]
pub struct StageSequence<'t> {
    toeplitz: &'t Toeplitz<'t>,
    level: Level,
}

impl StageSequence<'_> {
    pub fn level(&self) -> Level {
        self.level
    }
}

impl SymbolSequence for StageSequence<'_> {
    fn symbol_at(&self, n: SeqIndex) -> Result<Symbol> {
        match self.level {
            Level::Base => self.toeplitz.base_value(n),
            Level::Stage(m) => self.toeplitz.stage_value(m, n),
            Level::Limit => self.toeplitz.limit_value(n),
        }
    }
}
