//! Combinatorics of d-sequences: the two constraints every realizable
//! sequence satisfies, and exhaustive enumeration of the sequences of a
//! given weight that survive them.
//!
//! Survivors are *lemma-admissible*, not realizable: the constraints are
//! necessary conditions only.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::lie_dimension::DSequence as DVector;

/// Primes tabulated by [`proof_case_report`].
pub const PRIMES_OF_INTEREST: [u32; 6] = [2, 3, 5, 7, 11, 13];

/// `ϑ_{p'}(x)`: `x` with every factor `p` removed.
pub fn theta_p_prime(p: u32, x: u64) -> Result<u64> {
    if x < 1 {
        return Err(Error::InvalidParams("ϑ needs x ≥ 1".into()));
    }
    let mut x = x;
    while x % p as u64 == 0 {
        x /= p as u64;
    }
    Ok(x)
}

fn theta(p: u32, x: usize) -> u64 {
    theta_p_prime(p, x as u64).expect("x ≥ 1")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "part", rename_all = "snake_case")]
pub enum LemmaViolation {
    /// `d_(l+1) = 0` for some `l < pm`, yet `d_(pm+1) > d_(m+1)`.
    PowerStep {
        m: usize,
        l: usize,
        high: u32,
        low: u32,
    },
    /// `d_(m+1) = 0`, `s ≥ m`, `ϑ_{p'}(s) ≥ ϑ_{p'}(m)`, yet `d_(s+1) ≠ 0`.
    Gap { m: usize, s: usize, value: u32 },
}

impl fmt::Display for LemmaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LemmaViolation::PowerStep { m, l, high, low } => write!(
                f,
                "part 1 at m={m}: d_({}) = 0 but d_(pm+1) = {high} exceeds d_({}) = {low}",
                l + 1,
                m + 1
            ),
            LemmaViolation::Gap { m, s, value } => write!(
                f,
                "part 2 at m={m}: d_({}) = 0 but d_({}) = {value} with s={s}",
                m + 1,
                s + 1
            ),
        }
    }
}

/// Checks both constraints over the support range and returns every
/// violation, so the caller sees all of them at once.
///
/// 1. For `m ≥ 1`, if `d_(l+1) = 0` for some `1 ≤ l < pm`, then
///    `d_(pm+1) ≤ d_(m+1)`.
/// 2. If `d_(m+1) = 0`, then `d_(s+1) = 0` for every `s ≥ m` with
///    `ϑ_{p'}(s) ≥ ϑ_{p'}(m)`.
pub fn lemma_constraints_ok(v: &DVector) -> (bool, Vec<LemmaViolation>) {
    let p = v.p() as usize;
    // d_(k) vanishes for k > top, so indices beyond it are vacuous.
    let top = v.top();
    let mut out = Vec::new();
    for m in 1.. {
        if p * m + 1 > top {
            break;
        }
        let high = v.get(p * m + 1);
        let low = v.get(m + 1);
        if high > low {
            if let Some(l) = (1..p * m).find(|&l| v.get(l + 1) == 0) {
                out.push(LemmaViolation::PowerStep { m, l, high, low });
            }
        }
    }
    for m in 1..top {
        if v.get(m + 1) != 0 {
            continue;
        }
        for s in m + 1..top {
            let value = v.get(s + 1);
            if value != 0 && theta(v.p(), s) >= theta(v.p(), m) {
                out.push(LemmaViolation::Gap { m, s, value });
            }
        }
    }
    (out.is_empty(), out)
}

/// Every solution of `Σ_{m≥1} m·d_(m+1) = weight`, unfiltered, in canonical
/// order.
pub fn enumerate_weight(p: u32, weight: u64) -> Vec<DVector> {
    fn go(m: u64, rest: u64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if m > rest {
            return;
        }
        for k in (0..=rest / m).rev() {
            cur.push(k as u32);
            go(m + 1, rest - k * m, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    go(1, weight, &mut Vec::new(), &mut raw);
    let mut out: Vec<DVector> = raw.into_iter().map(|d| DVector::new(p, d)).collect();
    sort_canonical(&mut out);
    out
}

/// Ascending by the list of `(m, d_(m))` pairs of the support.
pub fn sort_canonical(v: &mut [DVector]) {
    v.sort_by_cached_key(|d| d.support().into_iter().collect::<Vec<_>>());
}

/// The lemma-admissible vectors of the given weight.
pub fn enumerate_admissible(p: u32, weight: u64) -> Vec<DVector> {
    enumerate_weight(p, weight)
        .into_iter()
        .filter(|d| lemma_constraints_ok(d).0)
        .collect()
}

/// Survivors for each prime in [`PRIMES_OF_INTEREST`].
pub fn proof_case_report(weight: u64) -> BTreeMap<u32, Vec<DVector>> {
    PRIMES_OF_INTEREST
        .iter()
        .map(|&p| (p, enumerate_admissible(p, weight)))
        .collect()
}
