//! Square roots of nonzero residues modulo `2^n`.
//!
//! A nonzero residue modulo `2^n` is a square iff it has the form
//! `4^r(8s+1)`. The class `B_{r,s,n}` collects the `k ∈ [1, 2^n]` whose
//! square lands on that residue; its size is `2^r · #B_{0,s,n−2r} ≤ 2^{r+2}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Largest exponent `n` for which `B_{r,s,n}` is enumerated by brute force.
pub const DEFAULT_ENUMERATION_CAP: u32 = 24;

/// The set `B_{r,s,n} = {1 ≤ k ≤ 2^n : k² ≡ 4^r(8s+1) mod 2^n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueClass {
    pub r: u32,
    pub s: u64,
    pub n: u32,
    /// Sorted members.
    pub members: Vec<u64>,
}

impl ResidueClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn residue(&self) -> u128 {
        class_residue(self.r, self.s).expect("constructed from a valid residue")
    }
}

fn class_residue(r: u32, s: u64) -> Option<u128> {
    let odd = (s as u128).checked_mul(8)?.checked_add(1)?;
    let four_r = 1u128.checked_shl(2 * r)?;
    four_r.checked_mul(odd)
}

fn modulus(n: u32) -> Result<u128> {
    if n == 0 || n > 64 {
        return Err(Error::Domain(format!(
            "modulus exponent n={n} must lie in 1..=64"
        )));
    }
    Ok(1u128 << n)
}

fn checked_residue(r: u32, s: u64, n: u32) -> Result<u128> {
    let m = modulus(n)?;
    match class_residue(r, s) {
        Some(q) if q <= m => Ok(q),
        _ => Err(Error::Domain(format!("4^{r}(8·{s}+1) exceeds 2^{n}"))),
    }
}

/// Writes `q` as `4^r(8s+1)` if possible.
pub fn residue_form(q: u64, n: u32) -> Result<Option<(u32, u64)>> {
    if q == 0 {
        return Err(Error::Domain(
            "the zero residue has no form 4^r(8s+1)".into(),
        ));
    }
    if q as u128 > modulus(n)? {
        return Err(Error::Domain(format!("residue {q} exceeds 2^{n}")));
    }
    let r = q.trailing_zeros();
    if r % 2 == 1 {
        return Ok(None);
    }
    let odd = q >> r;
    if odd % 8 != 1 {
        return Ok(None);
    }
    Ok(Some((r / 2, odd / 8)))
}

/// Enumerates `B_{r,s,n}` by brute force with the default cap.
pub fn enumerate_class(r: u32, s: u64, n: u32) -> Result<ResidueClass> {
    enumerate_class_capped(r, s, n, DEFAULT_ENUMERATION_CAP)
}

/// Brute-force enumeration of `B_{r,s,n}` over all `k ∈ [1, 2^n]`.
///
/// When `4^r(8s+1) = 2^n` (only possible for `s = 0`, `n = 2r`) the class is
/// the set of `k` with `k² ≡ 0`, which is a literal reading of the
/// definition but not one of the nonzero-residue classes.
pub fn enumerate_class_capped(r: u32, s: u64, n: u32, cap: u32) -> Result<ResidueClass> {
    let q = checked_residue(r, s, n)?;
    if n > cap {
        return Err(Error::Capacity(format!(
            "enumerating B_(r,s,n) for n={n} exceeds the cap n ≤ {cap}"
        )));
    }
    let m = 1u64 << n;
    let mask = m - 1;
    let target = (q as u64) & mask;
    let members = (1..=m)
        .filter(|&k| k.wrapping_mul(k) & mask == target)
        .collect();
    Ok(ResidueClass { r, s, n, members })
}

/// `#B_{0,s,m}` without enumeration: at most one odd root modulo 2,
/// two modulo 4 and four for `m ≥ 3`.
fn odd_class_size(s: u64, m: u32) -> u64 {
    match m {
        1 => 1,
        2 => 2,
        _ => {
            debug_assert!(class_residue(0, s).is_some_and(|q| q < 1u128 << m));
            4
        }
    }
}

/// `2^r · #B_{0,s,n−2r}`, computed without touching `B_{r,s,n}`.
///
/// The inner odd class is enumerated when `n − 2r` is within the cap and
/// taken from its closed-form size otherwise.
pub fn class_count_formula(r: u32, s: u64, n: u32) -> Result<u64> {
    checked_residue(r, s, n)?;
    if 2 * r >= n {
        return Err(Error::Domain(format!(
            "formula needs n − 2r ≥ 1, got n={n}, r={r}"
        )));
    }
    let inner_n = n - 2 * r;
    let inner = if inner_n <= DEFAULT_ENUMERATION_CAP {
        enumerate_class(0, s, inner_n)?.len() as u64
    } else {
        odd_class_size(s, inner_n)
    };
    Ok(inner << r)
}

/// Outcome of the exhaustive check of the class-size lemma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueLemmaReport {
    pub n_max: u32,
    pub classes_checked: u64,
    /// `(n, Σ|B_{r,s,n}|, #{k ≤ 2^n : k² ≢ 0})` for every `n`.
    pub coverage: Vec<(u32, u64, u64)>,
    pub first_failure: Option<String>,
}

impl ResidueLemmaReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// For every `n ≤ n_max` and every nonzero class `(r, s)`: brute-force size
/// equals the formula and is at most `2^{r+2}`; the classes are pairwise
/// disjoint and cover exactly the `k` whose square is nonzero mod `2^n`.
pub fn verify_residue_lemma(n_max: u32) -> Result<ResidueLemmaReport> {
    if n_max > DEFAULT_ENUMERATION_CAP {
        return Err(Error::Capacity(format!(
            "n_max={n_max} exceeds the enumeration cap {DEFAULT_ENUMERATION_CAP}"
        )));
    }
    let mut report = ResidueLemmaReport {
        n_max,
        classes_checked: 0,
        coverage: Vec::new(),
        first_failure: None,
    };
    for n in 1..=n_max {
        if let Some(failure) = check_level(n, &mut report)? {
            report.first_failure = Some(failure);
            break;
        }
    }
    Ok(report)
}

fn check_level(n: u32, report: &mut ResidueLemmaReport) -> Result<Option<String>> {
    let m = 1u64 << n;
    let mask = m - 1;
    // One pass over k, bucketed by k² mod 2^n.
    let mut roots: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for k in 1..=m {
        roots.entry(k.wrapping_mul(k) & mask).or_default().push(k);
    }

    let mut hits = vec![0u8; m as usize + 1];
    let mut covered = 0u64;
    let mut r = 0u32;
    while 2 * r < n {
        let mut s = 0u64;
        loop {
            let q = (1u64 << (2 * r)) * (8 * s + 1);
            if q >= m {
                break;
            }
            let members = roots.get(&q).map(Vec::as_slice).unwrap_or(&[]);
            let brute = members.len() as u64;
            let formula = class_count_formula(r, s, n)?;
            report.classes_checked += 1;
            if brute != formula {
                return Ok(Some(format!(
                    "n={n} r={r} s={s}: |B|={brute} but formula gives {formula}"
                )));
            }
            if brute > 1 << (r + 2) {
                return Ok(Some(format!("n={n} r={r} s={s}: |B|={brute} > 2^(r+2)")));
            }
            if n <= 12 {
                let direct = enumerate_class(r, s, n)?;
                if direct.members != members {
                    return Ok(Some(format!(
                        "n={n} r={r} s={s}: enumeration disagrees with bucketing"
                    )));
                }
            }
            for &k in members {
                hits[k as usize] += 1;
                if hits[k as usize] > 1 {
                    return Ok(Some(format!("n={n}: k={k} lies in two classes")));
                }
            }
            covered += brute;
            s += 1;
        }
        r += 1;
    }

    let mut nonzero = 0u64;
    for k in 1..=m {
        let is_nonzero = k.wrapping_mul(k) & mask != 0;
        nonzero += is_nonzero as u64;
        if is_nonzero != (hits[k as usize] == 1) {
            return Ok(Some(format!(
                "n={n}: k={k} has nonzero square residue {} but coverage is {}",
                is_nonzero, hits[k as usize]
            )));
        }
    }
    report.coverage.push((n, covered, nonzero));
    Ok(None)
}
