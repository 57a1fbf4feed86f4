//! Construction and numerical verification of a Toeplitz sequence `b` whose
//! values along the squares correlate with the Möbius function.
//!
//! The crate is organised bottom-up:
//!
//! - [`numtheory`]: Möbius/Liouville sieve, exact square roots and the
//!   classes of square roots modulo powers of two.
//! - [`schedule`]: the tower of tolerances `ε_i` and period exponents `n_i`
//!   that drives the construction, with the checkpoint lengths `K_M`.
//! - [`construction`]: lazy evaluation of the base sequence, every
//!   intermediate stage and the Toeplitz limit, plus a literal
//!   window-copying materializer used as an oracle.
//! - [`analysis`]: Cesàro averages, discrepancy densities, word complexity,
//!   recurrence checks and CSV report schemas.
//!
//! Indices are [`SeqIndex`] (`i128`), wide enough for periods up to `2^125`.

pub mod analysis;
pub mod budget;
pub mod construction;
pub mod error;
pub mod numtheory;
pub mod parallel;
pub mod schedule;

pub use budget::MemoryBudget;
pub use construction::{Symbol, SymbolSequence, Toeplitz};
pub use error::{Error, Result};
pub use numtheory::MobiusSieve;
pub use schedule::ParamSchedule;

/// Signed index into a two-sided sequence.
pub type SeqIndex = i128;
