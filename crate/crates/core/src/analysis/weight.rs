use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::numtheory::{ArithFn, MobiusSieve};
use crate::SeqIndex;

/// An arithmetic weight `ω: ℕ → ℂ` with a declared bound on `|ω|`.
pub trait WeightFunction: Sync {
    fn name(&self) -> String;

    fn bound(&self) -> f64;

    /// Whether [`WeightFunction::exact`] always returns a value, enabling
    /// exact Gaussian-integer accumulation.
    fn is_exact(&self) -> bool;

    fn exact(&self, sieve: &MobiusSieve, n: SeqIndex) -> Result<Option<Complex<i64>>>;

    fn value(&self, sieve: &MobiusSieve, n: SeqIndex) -> Result<Complex64> {
        match self.exact(sieve, n)? {
            Some(z) => Ok(Complex64::new(z.re as f64, z.im as f64)),
            None => Err(Error::Domain(format!(
                "weight {} has no value at {n}",
                self.name()
            ))),
        }
    }
}

impl WeightFunction for ArithFn {
    fn name(&self) -> String {
        ArithFn::name(*self).to_string()
    }

    fn bound(&self) -> f64 {
        1.0
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn exact(&self, sieve: &MobiusSieve, n: SeqIndex) -> Result<Option<Complex<i64>>> {
        Ok(Some(Complex::new(self.eval(sieve, n)? as i64, 0)))
    }
}

/// A Gaussian-integer valued weight, e.g. a Dirichlet character modulo 4.
pub struct GaussianWeight<F> {
    pub name: String,
    pub bound: f64,
    pub f: F,
}

impl<F> WeightFunction for GaussianWeight<F>
where
    F: Fn(SeqIndex) -> Complex<i64> + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn exact(&self, _sieve: &MobiusSieve, n: SeqIndex) -> Result<Option<Complex<i64>>> {
        let z = (self.f)(n);
        check_bound(
            &self.name,
            self.bound,
            n,
            Complex64::new(z.re as f64, z.im as f64),
        )?;
        Ok(Some(z))
    }
}

/// A general complex weight, accumulated in compensated floating point.
pub struct ComplexWeight<F> {
    pub name: String,
    pub bound: f64,
    pub f: F,
}

impl<F> WeightFunction for ComplexWeight<F>
where
    F: Fn(SeqIndex) -> Complex64 + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn exact(&self, _sieve: &MobiusSieve, _n: SeqIndex) -> Result<Option<Complex<i64>>> {
        Ok(None)
    }

    fn value(&self, _sieve: &MobiusSieve, n: SeqIndex) -> Result<Complex64> {
        let z = (self.f)(n);
        check_bound(&self.name, self.bound, n, z)?;
        Ok(z)
    }
}

fn check_bound(name: &str, bound: f64, n: SeqIndex, z: Complex64) -> Result<()> {
    if z.norm() > bound * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::Domain(format!(
            "weight {name} has |ω({n})| = {} above its bound {bound}",
            z.norm()
        )));
    }
    Ok(())
}
