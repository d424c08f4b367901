//! Lie dimension subgroups `D_(m)` from the lower central series, the
//! Jennings d-sequence, and the upper Lie nilpotency index `t^L(KG)`.
//!
//! ```text
//! D_(m) = ∏ γ_i(G)^{p^j}   over i ≥ 2, j ≥ 0 with (i-1)·p^j ≥ m-1
//! t^L   = 2 + (p-1) · Σ_{m≥1} m·d_(m+1)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{is_prime, Error, Result};
use crate::group_engine::PcPresentation;
use crate::structure::{lower_central_series, power_subgroup, subgroup_product, Subgroup};

/// A prime together with the finitely supported sequence `d_(2), d_(3), …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DSequence {
    p: u32,
    /// `d[k]` is `d_(k+2)`; no trailing zeros.
    d: Vec<u32>,
}

impl DSequence {
    pub fn new(p: u32, mut d: Vec<u32>) -> Self {
        while d.last() == Some(&0) {
            d.pop();
        }
        DSequence { p, d }
    }

    /// From `(m, d_(m))` pairs, `m ≥ 2`.
    pub fn from_pairs(p: u32, pairs: &[(usize, u32)]) -> Self {
        let len = pairs.iter().map(|&(m, _)| m - 1).max().unwrap_or(0);
        let mut d = vec![0; len];
        for &(m, v) in pairs {
            assert!(m >= 2, "d-sequence indices start at 2");
            d[m - 2] = v;
        }
        DSequence::new(p, d)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `d_(m)`; zero outside the support.
    pub fn get(&self, m: usize) -> u32 {
        if m < 2 {
            return 0;
        }
        self.d.get(m - 2).copied().unwrap_or(0)
    }

    /// Largest `m` with `d_(m) ≠ 0`, or 1 for the empty sequence.
    pub fn top(&self) -> usize {
        self.d.len() + 1
    }

    pub fn values(&self) -> &[u32] {
        &self.d
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// `Σ_{m≥1} m·d_(m+1)`.
    pub fn weight(&self) -> u64 {
        self.d
            .iter()
            .enumerate()
            .map(|(k, &v)| (k as u64 + 1) * v as u64)
            .sum()
    }

    /// `Σ_{m≥2} d_(m)`.
    pub fn total(&self) -> u64 {
        self.d.iter().map(|&v| v as u64).sum()
    }

    pub fn support(&self) -> BTreeMap<usize, u32> {
        self.d
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(k, &v)| (k + 2, v))
            .collect()
    }
}

impl fmt::Display for DSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .support()
            .iter()
            .map(|(m, v)| format!("{m}:{v}"))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for DSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let support: BTreeMap<String, u32> = self
            .support()
            .into_iter()
            .map(|(m, v)| (m.to_string(), v))
            .collect();
        let mut st = s.serialize_struct("DSequence", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("d", &support)?;
        st.serialize_field("weight", &self.weight())?;
        st.end()
    }
}

/// `D_(2) ⊇ D_(3) ⊇ … ⊇ 1`.
#[derive(Debug, Clone)]
pub struct LieDimensionChain {
    pub p: u32,
    /// `chain[k]` is `D_(k+2)`; the last entry is trivial.
    pub chain: Vec<Subgroup>,
}

impl LieDimensionChain {
    pub fn compute(group: &PcPresentation, p: u32, cap: usize) -> Result<Self> {
        let ctx = PowerTable::new(group, p, cap)?;
        let mut chain = Vec::new();
        for m in 2.. {
            let d = ctx.dimension_subgroup(m, cap)?;
            let done = d.is_trivial();
            chain.push(d);
            if done {
                break;
            }
        }
        for w in chain.windows(2) {
            if !w[1].is_subgroup_of(&w[0]) {
                return Err(Error::Inconsistent(
                    "Lie dimension chain is not descending".into(),
                ));
            }
        }
        Ok(LieDimensionChain { p, chain })
    }

    pub fn d_sequence(&self) -> Result<DSequence> {
        let d = self
            .chain
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].log_order(), w[1].log_order());
                if w[0].order() % w[1].order() != 0 {
                    return Err(Error::Inconsistent("index is not a p-power".into()));
                }
                Ok(a - b)
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(DSequence::new(self.p, d))
    }
}

/// The subgroups `γ_i^{p^j}`, computed once.
struct PowerTable {
    p: u32,
    group: PcPresentation,
    /// `powers[i-2][j]` is `γ_i^{p^j}`, down to the first trivial power.
    powers: Vec<Vec<Subgroup>>,
}

impl PowerTable {
    fn new(group: &PcPresentation, p: u32, cap: usize) -> Result<Self> {
        check_lie_nilpotent(group, p)?;
        let lcs = lower_central_series(group, cap)?;
        let mut powers = Vec::new();
        if p == group.p() {
            for gamma in lcs.iter().skip(1).filter(|h| !h.is_trivial()) {
                let mut row = vec![gamma.clone()];
                let mut q = p as u64;
                loop {
                    let h = power_subgroup(gamma, q, cap)?;
                    let done = h.is_trivial();
                    row.push(h);
                    if done {
                        break;
                    }
                    q *= p as u64;
                }
                powers.push(row);
            }
        }
        Ok(PowerTable {
            p,
            group: group.clone(),
            powers,
        })
    }

    fn dimension_subgroup(&self, m: usize, cap: usize) -> Result<Subgroup> {
        let mut d = Subgroup::trivial(&self.group);
        for (k, row) in self.powers.iter().enumerate() {
            let i = k + 2;
            let mut q = 1u64;
            for h in row {
                if (i as u64 - 1) * q >= m as u64 - 1 {
                    // Later powers are contained in this one.
                    d = subgroup_product(&d, h, cap)?;
                    break;
                }
                q *= self.p as u64;
            }
        }
        Ok(d)
    }
}

fn check_lie_nilpotent(group: &PcPresentation, p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if p != group.p() && !group.is_abelian() {
        return Err(Error::NotLieNilpotent(format!(
            "|G'| is a power of {} but the field has characteristic {p}",
            group.p()
        )));
    }
    Ok(())
}

/// `D_(m)` for `m ≥ 2`.
pub fn lie_dimension_subgroup(
    group: &PcPresentation,
    p: u32,
    m: usize,
    cap: usize,
) -> Result<Subgroup> {
    if m < 2 {
        return Err(Error::InvalidParams(format!("m = {m}, need m ≥ 2")));
    }
    PowerTable::new(group, p, cap)?.dimension_subgroup(m, cap)
}

pub fn d_sequence(group: &PcPresentation, p: u32, cap: usize) -> Result<DSequence> {
    LieDimensionChain::compute(group, p, cap)?.d_sequence()
}

/// `2 + (p-1)·Σ m·d_(m+1)`.
pub fn jennings_index(d: &DSequence) -> u64 {
    2 + (d.p() as u64 - 1) * d.weight()
}

/// `t^L(KG)` for `K` of characteristic `p`.
pub fn upper_index(group: &PcPresentation, p: u32, cap: usize) -> Result<u64> {
    Ok(jennings_index(&d_sequence(group, p, cap)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_engine::parse_presentation;
    use crate::structure::DEFAULT_CAP;

    #[test]
    fn dihedral_sequences() {
        let d8 = parse_presentation("p 2\ngens 3\npow 2 : g3^1\ncomm 2 1 : g3^1\n").unwrap();
        assert!(lie_dimension_subgroup(&d8, 2, 3, DEFAULT_CAP)
            .unwrap()
            .is_trivial());
        let d = d_sequence(&d8, 2, DEFAULT_CAP).unwrap();
        assert_eq!(d, DSequence::from_pairs(2, &[(2, 1)]));
        assert_eq!(jennings_index(&d), 3);
        let d16 = parse_presentation(
            "p 2\ngens 4\npow 2 : g3^1\npow 3 : g4^1\ncomm 2 1 : g3^1 g4^1\ncomm 3 1 : g4^1\n",
        )
        .unwrap();
        let d = d_sequence(&d16, 2, DEFAULT_CAP).unwrap();
        assert_eq!(d.to_string(), "{2:1,3:1}");
        assert_eq!(jennings_index(&d), 5);
    }

    #[test]
    fn index_examples() {
        assert_eq!(jennings_index(&DSequence::new(3, vec![])), 2);
        assert_eq!(
            jennings_index(&DSequence::from_pairs(7, &[(2, 3), (8, 1)])),
            62
        );
        let heis5 = parse_presentation("p 5\ngens 3\ncomm 2 1 : g3^1\n").unwrap();
        assert_eq!(upper_index(&heis5, 5, DEFAULT_CAP).unwrap(), 6);
        assert!(matches!(
            upper_index(&heis5, 3, DEFAULT_CAP),
            Err(Error::NotLieNilpotent(_))
        ));
        let c9 = parse_presentation("p 3\ngens 2\npow 1 : g2^1\n").unwrap();
        assert_eq!(upper_index(&c9, 2, DEFAULT_CAP).unwrap(), 2);
    }

    #[test]
    fn weight_and_display() {
        let d = DSequence::from_pairs(2, &[(2, 4), (3, 1), (5, 1)]);
        assert_eq!(d.weight(), 4 + 2 + 4);
        assert_eq!(d.total(), 6);
        assert_eq!(d.get(4), 0);
        assert_eq!(d.to_string(), "{2:4,3:1,5:1}");
    }
}
