use std::env;

use crate::error::{Error, Result};

/// Environment variable overriding the default memory budget, in bytes.
/// Accepts an optional `K`, `M` or `G` suffix (binary multiples).
pub const BUDGET_ENV: &str = "TOEPLITZ_SARNAK_MEMORY";

const DEFAULT_BYTES: u64 = 1 << 30;

/// Upper bound on the memory a single table or materialization may claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBudget {
    bytes: u64,
}

impl Default for MemoryBudget {
    fn default() -> Self {
        MemoryBudget {
            bytes: DEFAULT_BYTES,
        }
    }
}

impl MemoryBudget {
    pub fn new(bytes: u64) -> Self {
        MemoryBudget { bytes }
    }

    /// Reads [`BUDGET_ENV`], falling back to the default of 1 GiB.
    pub fn from_env() -> Result<Self> {
        match env::var(BUDGET_ENV) {
            Ok(raw) => parse_bytes(&raw).map(MemoryBudget::new),
            Err(_) => Ok(MemoryBudget::default()),
        }
    }

    pub fn bytes(&self) -> u64 {
        self.bytes
    }

    pub fn check(&self, what: &str, requested: u64) -> Result<()> {
        if requested > self.bytes {
            return Err(Error::Capacity(format!(
                "{what} needs {requested} bytes, budget is {} bytes (set {BUDGET_ENV} to raise it)",
                self.bytes
            )));
        }
        Ok(())
    }
}

fn parse_bytes(raw: &str) -> Result<u64> {
    let raw = raw.trim();
    let (digits, shift) = match raw.chars().last() {
        Some('K' | 'k') => (&raw[..raw.len() - 1], 10),
        Some('M' | 'm') => (&raw[..raw.len() - 1], 20),
        Some('G' | 'g') => (&raw[..raw.len() - 1], 30),
        _ => (raw, 0),
    };
    let value: u64 = digits
        .parse()
        .map_err(|_| Error::Parse(format!("{BUDGET_ENV}: cannot parse '{raw}'")))?;
    value
        .checked_mul(1 << shift)
        .ok_or_else(|| Error::Parse(format!("{BUDGET_ENV}: '{raw}' overflows")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffixes() {
        assert_eq!(parse_bytes("512").unwrap(), 512);
        assert_eq!(parse_bytes("4K").unwrap(), 4096);
        assert_eq!(parse_bytes("2G").unwrap(), 2 << 30);
        assert!(parse_bytes("lots").is_err());
    }

    #[test]
    fn check_rejects_oversized() {
        let b = MemoryBudget::new(100);
        assert!(b.check("x", 100).is_ok());
        assert!(matches!(b.check("x", 101), Err(Error::Capacity(_))));
    }
}
