use crate::error::{Error, Result};

/// A polynomial `P(n) = Σ c_i n^i` with non-negative integer coefficients,
/// hence non-decreasing on `ℕ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySpec {
    coeffs: Vec<u64>,
}

impl PolySpec {
    /// Coefficients from the constant term upward. Constant polynomials are
    /// rejected: `β_P` would be unbounded.
    pub fn new(coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.iter().skip(1).all(|&c| c == 0) {
            return Err(Error::Domain("β_P needs a non-constant polynomial".into()));
        }
        Ok(PolySpec { coeffs })
    }

    pub fn square() -> Self {
        PolySpec {
            coeffs: vec![0, 0, 1],
        }
    }

    pub fn identity() -> Self {
        PolySpec { coeffs: vec![0, 1] }
    }

    /// `P(n)`, or `None` on overflow.
    pub fn eval(&self, n: u128) -> Option<u128> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0u128, |acc, &c| acc.checked_mul(n)?.checked_add(c as u128))
    }
}

/// `β_P(n)`: the largest `m ≥ 0` with `P(m) ≤ n`.
pub fn poly_beta(p: &PolySpec, n: u128) -> Result<u128> {
    let fits = |m: u128| p.eval(m).is_some_and(|v| v <= n);
    if !fits(0) {
        return Err(Error::Domain(format!("P(0) > {n}: no m with P(m) ≤ {n}")));
    }
    let mut hi = 1u128;
    while fits(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // invariant: fits(lo), !fits(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
