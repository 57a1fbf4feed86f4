use crate::budget::MemoryBudget;
use crate::error::{Error, Result};
use crate::SeqIndex;

/// Tables of `μ(n)` and `λ(n)` for `1 ≤ n ≤ limit`, built by a linear sieve.
#[derive(Debug, Clone)]
pub struct MobiusSieve {
    limit: u64,
    mu: Vec<i8>,
    liouville: Vec<i8>,
}

/// Bytes per table entry: μ, λ and the transient compositeness flag.
const BYTES_PER_ENTRY: u64 = 3;

/// Builds the sieve up to `limit` under the default (environment) budget.
pub fn build_sieve(limit: u64) -> Result<MobiusSieve> {
    MobiusSieve::new(limit, &MemoryBudget::from_env()?)
}

impl MobiusSieve {
    pub fn new(limit: u64, budget: &MemoryBudget) -> Result<Self> {
        if limit == 0 {
            return Err(Error::Capacity("sieve limit must be at least 1".into()));
        }
        budget.check(
            "Möbius sieve",
            limit.saturating_add(1).saturating_mul(BYTES_PER_ENTRY),
        )?;
        let n = usize::try_from(limit)
            .map_err(|_| Error::Capacity(format!("sieve limit {limit} exceeds address space")))?;

        let mut mu = vec![0i8; n + 1];
        let mut liouville = vec![0i8; n + 1];
        let mut composite = vec![false; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        mu[1] = 1;
        liouville[1] = 1;
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u32);
                mu[i] = -1;
                liouville[i] = -1;
            }
            for &p in &primes {
                let p = p as usize;
                let ip = i * p;
                if ip > n {
                    break;
                }
                composite[ip] = true;
                liouville[ip] = -liouville[i];
                if i % p == 0 {
                    mu[ip] = 0;
                    break;
                }
                mu[ip] = -mu[i];
            }
        }
        Ok(MobiusSieve {
            limit,
            mu,
            liouville,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn slot(&self, n: SeqIndex) -> Result<usize> {
        if n < 1 || n > self.limit as SeqIndex {
            return Err(Error::Range {
                index: n,
                limit: self.limit,
            });
        }
        Ok(n as usize)
    }

    /// `μ(n)`; out-of-range arguments are an error, never a silent zero.
    pub fn mobius(&self, n: SeqIndex) -> Result<i8> {
        self.slot(n).map(|i| self.mu[i])
    }

    /// Liouville's `λ(n) = (−1)^Ω(n)`.
    pub fn liouville(&self, n: SeqIndex) -> Result<i8> {
        self.slot(n).map(|i| self.liouville[i])
    }

    /// Number of squarefree `n ≤ upto`, i.e. `Σ μ(n)²`.
    pub fn squarefree_count(&self, upto: u64) -> Result<u64> {
        if upto > self.limit {
            return Err(Error::Range {
                index: upto as SeqIndex,
                limit: self.limit,
            });
        }
        Ok(self.mu[1..=upto as usize]
            .iter()
            .filter(|&&v| v != 0)
            .count() as u64)
    }
}
