//! Arithmetic primitives: the Möbius sieve, exact square roots and the
//! square-root classes modulo powers of two.

mod residues;
mod sieve;

pub use residues::{
    class_count_formula, enumerate_class, residue_form, verify_residue_lemma, ResidueClass,
    ResidueLemmaReport, DEFAULT_ENUMERATION_CAP,
};
pub use sieve::{build_sieve, MobiusSieve};

use crate::error::Result;
use crate::SeqIndex;

/// Symbol-valued arithmetic functions that can sit on the squares of the
/// base sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ArithFn {
    #[default]
    Mobius,
    Liouville,
    Unit,
}

impl ArithFn {
    pub fn eval(self, sieve: &MobiusSieve, k: SeqIndex) -> Result<i8> {
        match self {
            ArithFn::Mobius => sieve.mobius(k),
            ArithFn::Liouville => sieve.liouville(k),
            ArithFn::Unit => {
                if k >= 1 {
                    Ok(1)
                } else {
                    sieve.mobius(k)
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ArithFn::Mobius => "mobius",
            ArithFn::Liouville => "liouville",
            ArithFn::Unit => "unit",
        }
    }
}

impl std::str::FromStr for ArithFn {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mobius" | "möbius" | "mu" => Ok(ArithFn::Mobius),
            "liouville" | "lambda" => Ok(ArithFn::Liouville),
            "unit" | "one" => Ok(ArithFn::Unit),
            other => Err(crate::Error::Parse(format!(
                "unknown weight '{other}' (expected mobius, liouville or unit)"
            ))),
        }
    }
}

/// Returns `k ≥ 1` with `k² = n`, or `None` when `n` is not the square of a
/// positive integer. Zero and negative indices have no such root.
pub fn exact_sqrt(n: SeqIndex) -> Option<u128> {
    if n <= 0 {
        return None;
    }
    let n = n as u128;
    let k = n.isqrt();
    (k * k == n).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(exact_sqrt(49), Some(7));
        assert_eq!(exact_sqrt(50), None);
        assert_eq!(exact_sqrt(0), None);
        assert_eq!(exact_sqrt(-4), None);
        assert_eq!(exact_sqrt(1), Some(1));
    }

    #[test]
    fn near_i128_limit() {
        let k: u128 = (1 << 63) - 25;
        let n = (k * k) as SeqIndex;
        assert_eq!(exact_sqrt(n), Some(k));
        assert_eq!(exact_sqrt(n - 1), None);
        assert_eq!(exact_sqrt(n + 1), None);
    }

    proptest! {
        #[test]
        fn squares_round_trip(k in 1u64..(1u64 << 63)) {
            let n = (k as u128 * k as u128) as SeqIndex;
            prop_assert_eq!(exact_sqrt(n), Some(k as u128));
            prop_assert_eq!(exact_sqrt(n + 1), None);
        }
    }
}
