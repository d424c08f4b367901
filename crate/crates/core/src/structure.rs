//! Subgroups of a pc group as explicit element sets, and the invariants the
//! classification needs: series, powers, centers, abelian invariants and
//! isomorphism fingerprints.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_engine::{Element, PcPresentation};

/// Default enumeration cap (elements per subgroup).
pub const DEFAULT_CAP: usize = 1 << 20;

#[derive(Debug, Clone)]
enum Members {
    /// The whole group, never enumerated unless asked.
    Whole,
    /// Sorted element keys.
    Explicit(Arc<Vec<u64>>),
}

/// A subgroup of a pc group.
///
/// The whole group is represented symbolically so that series computations
/// on large groups only ever enumerate the proper subgroups involved.
#[derive(Debug, Clone)]
pub struct Subgroup {
    group: PcPresentation,
    members: Members,
    generators: Vec<Element>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.order() == other.order() && self.is_subgroup_of(other)
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn whole(group: &PcPresentation) -> Self {
        Subgroup {
            group: group.clone(),
            members: Members::Whole,
            generators: group.generators(),
        }
    }

    pub fn trivial(group: &PcPresentation) -> Self {
        Subgroup {
            group: group.clone(),
            members: Members::Explicit(Arc::new(vec![0])),
            generators: Vec::new(),
        }
    }

    pub fn group(&self) -> &PcPresentation {
        &self.group
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        match &self.members {
            Members::Whole => self.group.order(),
            Members::Explicit(v) => v.len() as u128,
        }
    }

    /// `log_p |H|`.
    pub fn log_order(&self) -> u32 {
        match &self.members {
            Members::Whole => self.group.ngens() as u32,
            Members::Explicit(v) => log_p(v.len() as u128, self.group.p()),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.group.order()
    }

    pub fn contains(&self, x: &Element) -> bool {
        match &self.members {
            Members::Whole => true,
            Members::Explicit(v) => v.binary_search(&self.group.key(x)).is_ok(),
        }
    }

    fn contains_key(&self, k: u64) -> bool {
        match &self.members {
            Members::Whole => true,
            Members::Explicit(v) => v.binary_search(&k).is_ok(),
        }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        if other.order() < self.order() {
            return false;
        }
        match (&self.members, &other.members) {
            (_, Members::Whole) => true,
            (Members::Whole, _) => other.is_whole(),
            (Members::Explicit(a), Members::Explicit(_)) => {
                a.iter().all(|&k| other.contains_key(k))
            }
        }
    }

    /// Element keys in increasing order, enumerating the whole group if needed.
    pub fn keys(&self, cap: usize) -> Result<Arc<Vec<u64>>> {
        match &self.members {
            Members::Explicit(v) => Ok(v.clone()),
            Members::Whole => {
                let order = self.group.order();
                if order > cap as u128 {
                    return Err(Error::CapExceeded {
                        what: "whole group".into(),
                        cap,
                    });
                }
                Ok(Arc::new((0..order as u64).collect()))
            }
        }
    }

    pub fn elements(&self, cap: usize) -> Result<Vec<Element>> {
        Ok(self
            .keys(cap)?
            .iter()
            .map(|&k| self.group.element_of_key(k))
            .collect())
    }

    /// Whether the subgroup's generators commute pairwise.
    pub fn is_abelian(&self) -> bool {
        if matches!(self.members, Members::Whole) {
            return self.group.is_abelian();
        }
        let g = &self.generators;
        (0..g.len()).all(|i| {
            (i + 1..g.len())
                .all(|j| self.group.multiply(&g[i], &g[j]) == self.group.multiply(&g[j], &g[i]))
        })
    }
}

fn log_p(mut n: u128, p: u32) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p as u128;
        k += 1;
    }
    k
}

/// Breadth-first closure under right multiplication by `gens`, seeded with
/// an already closed set. Finite groups need no inverses.
fn close_keys(
    group: &PcPresentation,
    seed: &[u64],
    gens: &[Element],
    cap: usize,
    what: &str,
) -> Result<Vec<u64>> {
    let mut seen: HashSet<u64> = seed.iter().copied().collect();
    seen.insert(0);
    let mut queue: Vec<u64> = seen.iter().copied().collect();
    while let Some(k) = queue.pop() {
        let x = group.element_of_key(k);
        for g in gens {
            let y = group.key(&group.multiply(&x, g));
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: what.to_string(),
                        cap,
                    });
                }
                queue.push(y);
            }
        }
    }
    let mut v: Vec<u64> = seen.into_iter().collect();
    v.sort_unstable();
    Ok(v)
}

/// Grows `h` by one more generator; no-op if it is already a member.
fn adjoin(h: &mut Subgroup, x: Element, cap: usize) -> Result<()> {
    if h.contains(&x) {
        return Ok(());
    }
    h.generators.push(x);
    let seed = h.keys(cap)?;
    let keys = close_keys(&h.group, &seed, &h.generators, cap, "subgroup closure")?;
    h.members = if keys.len() as u128 == h.group.order() {
        Members::Whole
    } else {
        Members::Explicit(Arc::new(keys))
    };
    Ok(())
}

/// The subgroup generated by `gens`, keeping only the generators that were
/// actually needed.
pub fn closure(group: &PcPresentation, gens: &[Element], cap: usize) -> Result<Subgroup> {
    let mut h = Subgroup::trivial(group);
    for g in gens {
        adjoin(&mut h, g.clone(), cap)?;
    }
    Ok(h)
}

/// The smallest normal subgroup of `ambient` containing `gens`.
pub fn normal_closure_in(ambient: &Subgroup, gens: &[Element], cap: usize) -> Result<Subgroup> {
    let group = &ambient.group;
    let mut n = closure(group, gens, cap)?;
    // Conjugating the generators of N by those of the ambient group suffices.
    let mut i = 0;
    while i < n.generators.len() {
        let x = n.generators[i].clone();
        for g in ambient.generators.clone() {
            let c = group.conjugate(&x, &g);
            adjoin(&mut n, c, cap)?;
        }
        i += 1;
    }
    Ok(n)
}

/// The normal closure of `gens` in the whole group.
pub fn normal_closure(group: &PcPresentation, gens: &[Element], cap: usize) -> Result<Subgroup> {
    normal_closure_in(&Subgroup::whole(group), gens, cap)
}

/// `HK`, for normal `H` and `K`.
pub fn subgroup_product(h: &Subgroup, k: &Subgroup, cap: usize) -> Result<Subgroup> {
    if k.is_subgroup_of(h) {
        return Ok(h.clone());
    }
    if h.is_subgroup_of(k) {
        return Ok(k.clone());
    }
    let mut out = h.clone();
    for g in &k.generators {
        adjoin(&mut out, g.clone(), cap)?;
    }
    Ok(out)
}

/// `H ∩ K`, with a generating set chosen greedily from the intersection.
pub fn intersection(h: &Subgroup, k: &Subgroup, cap: usize) -> Result<Subgroup> {
    if h.is_subgroup_of(k) {
        return Ok(h.clone());
    }
    if k.is_subgroup_of(h) {
        return Ok(k.clone());
    }
    let (small, big) = if h.order() <= k.order() {
        (h, k)
    } else {
        (k, h)
    };
    let keys = small.keys(cap)?;
    let common: Vec<u64> = keys
        .iter()
        .copied()
        .filter(|&x| big.contains_key(x))
        .collect();
    let group = &h.group;
    let mut gens = Vec::new();
    let mut span = Subgroup::trivial(group);
    for &x in &common {
        if !span.contains_key(x) {
            let e = group.element_of_key(x);
            adjoin(&mut span, e.clone(), cap)?;
            gens.push(e);
        }
        if span.order() == common.len() as u128 {
            break;
        }
    }
    Ok(Subgroup {
        group: group.clone(),
        members: Members::Explicit(Arc::new(common)),
        generators: gens,
    })
}

/// `H^q`: the subgroup generated by all `q`-th powers of elements of `H`.
pub fn power_subgroup(h: &Subgroup, q: u64, cap: usize) -> Result<Subgroup> {
    if q == 1 {
        return Ok(h.clone());
    }
    let group = &h.group;
    let mut out = Subgroup::trivial(group);
    if h.is_abelian() {
        // In an abelian group x ↦ x^q is a homomorphism.
        for g in &h.generators {
            adjoin(&mut out, group.power(g, q as i64), cap)?;
        }
        return Ok(out);
    }
    for x in h.elements(cap)? {
        let y = group.power(&x, q as i64);
        adjoin(&mut out, y, cap)?;
    }
    Ok(out)
}

/// `[γ_1 = G, γ_2, …, 1]`.
pub fn lower_central_series(group: &PcPresentation, cap: usize) -> Result<Vec<Subgroup>> {
    let whole = Subgroup::whole(group);
    let mut series = vec![whole.clone()];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            return Ok(series);
        }
        let next = commutator_subgroup_with(&whole, last, cap)?;
        if next.order() == last.order() {
            return Err(Error::NotLieNilpotent(
                "lower central series is stationary above the identity".into(),
            ));
        }
        series.push(next);
    }
}

/// `[N, A]` for `N` normal in `A`.
fn commutator_subgroup_with(ambient: &Subgroup, n: &Subgroup, cap: usize) -> Result<Subgroup> {
    let group = &ambient.group;
    let mut comms = Vec::new();
    for x in &n.generators {
        for g in &ambient.generators {
            let c = group.commutator(x, g);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    normal_closure_in(ambient, &comms, cap)
}

/// `H′ = [H, H]`.
pub fn derived_subgroup(h: &Subgroup, cap: usize) -> Result<Subgroup> {
    commutator_subgroup_with(h, h, cap)
}

/// `Z(H)`, by testing every element against the generators of `H`.
pub fn center(h: &Subgroup, cap: usize) -> Result<Subgroup> {
    let group = &h.group;
    if h.is_abelian() {
        return Ok(h.clone());
    }
    let mut z = Subgroup::trivial(group);
    for x in h.elements(cap)? {
        if z.contains(&x) {
            continue;
        }
        let central = h
            .generators
            .iter()
            .all(|g| group.multiply(&x, g) == group.multiply(g, &x));
        if central {
            adjoin(&mut z, x, cap)?;
        }
    }
    Ok(z)
}

/// `exp(H)`, the largest element order.
pub fn exponent(h: &Subgroup, cap: usize) -> Result<u64> {
    let group = &h.group;
    if h.is_abelian() {
        return Ok(h
            .generators
            .iter()
            .map(|g| group.element_order(g))
            .max()
            .unwrap_or(1));
    }
    // exp(H) = p^k for the least k with H^{p^k} = 1.
    let p = group.p() as u64;
    let mut q = 1u64;
    loop {
        if power_subgroup(h, q, cap)?.is_trivial() {
            return Ok(q);
        }
        q *= p;
    }
}

/// `log_p |H^{p^j}|` for `j = 0, 1, …` up to and including the first zero.
fn power_profile(h: &Subgroup, cap: usize) -> Result<Vec<u32>> {
    let p = h.group.p() as u64;
    let mut out = Vec::new();
    let mut q = 1u64;
    loop {
        let a = power_subgroup(h, q, cap)?.log_order();
        out.push(a);
        if a == 0 {
            return Ok(out);
        }
        q *= p;
    }
}

/// Invariant factors from the sequence `a_j = log_p |H^{p^j}|`, `j ≥ 0`.
fn invariants_from_profile(p: u64, a: &[u32]) -> Vec<u64> {
    // r_j = a_j - a_{j+1} counts cyclic factors of order at least p^{j+1}.
    let r: Vec<u32> = a.windows(2).map(|w| w[0] - w[1]).collect();
    let mut out = Vec::new();
    for k in (0..r.len()).rev() {
        let exactly = r[k] - r.get(k + 1).copied().unwrap_or(0);
        for _ in 0..exactly {
            out.push(p.pow(k as u32 + 1));
        }
    }
    out
}

/// Invariant factors of an abelian subgroup, largest first.
pub fn abelian_invariants(h: &Subgroup, cap: usize) -> Result<Vec<u64>> {
    if !h.is_abelian() {
        return Err(Error::NotAbelian);
    }
    Ok(invariants_from_profile(
        h.group.p() as u64,
        &power_profile(h, cap)?,
    ))
}

/// Invariants that separate the groups the classification needs to tell
/// apart, without a full isomorphism test.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub order: u128,
    pub exponent: u64,
    pub center_order: u128,
    pub center: Vec<u64>,
    pub derived_order: u128,
    pub derived: Box<IsoType>,
    pub abelianization: Vec<u64>,
    /// `|H^{p^j}|` for `j ≥ 1`, ending at 1.
    pub power_orders: Vec<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum IsoType {
    Abelian(Vec<u64>),
    Fingerprint(Fingerprint),
}

impl IsoType {
    pub fn trivial() -> Self {
        IsoType::Abelian(Vec::new())
    }

    pub fn order(&self) -> u128 {
        match self {
            IsoType::Abelian(v) => v.iter().map(|&x| x as u128).product(),
            IsoType::Fingerprint(f) => f.order,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, IsoType::Abelian(_))
    }

    pub fn abelian_invariants(&self) -> Option<&[u64]> {
        match self {
            IsoType::Abelian(v) => Some(v),
            IsoType::Fingerprint(_) => None,
        }
    }

    /// Parses `1`, `C9xC3`, `C5xC5xC5` and the like.
    pub fn parse_abelian(s: &str) -> Option<IsoType> {
        if s == "1" {
            return Some(IsoType::trivial());
        }
        let mut v = Vec::new();
        for part in s.split('x') {
            let n: u64 = part.strip_prefix('C')?.parse().ok()?;
            if n < 2 {
                return None;
            }
            v.push(n);
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        Some(IsoType::Abelian(v))
    }
}

impl fmt::Display for IsoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T: fmt::Display>(v: &[T]) -> String {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
        match self {
            IsoType::Abelian(v) if v.is_empty() => f.write_str("1"),
            IsoType::Abelian(v) => {
                let parts: Vec<String> = v.iter().map(|n| format!("C{n}")).collect();
                f.write_str(&parts.join("x"))
            }
            IsoType::Fingerprint(fp) => write!(
                f,
                "({},{},{},{},{},{},{},{})",
                fp.order,
                fp.exponent,
                fp.center_order,
                list(&fp.center),
                fp.derived_order,
                match &*fp.derived {
                    IsoType::Abelian(v) => list(v),
                    other => other.to_string(),
                },
                list(&fp.abelianization),
                list(&fp.power_orders)
            ),
        }
    }
}

/// The isomorphism type of `H`: invariant factors when abelian, a
/// fingerprint otherwise.
pub fn fingerprint(h: &Subgroup, cap: usize) -> Result<IsoType> {
    if h.is_abelian() {
        return Ok(IsoType::Abelian(abelian_invariants(h, cap)?));
    }
    let group = &h.group;
    let p = group.p() as u64;
    let z = center(h, cap)?;
    let d = derived_subgroup(h, cap)?;
    let mut ab_profile = Vec::new();
    let mut power_orders = Vec::new();
    let mut q = 1u64;
    loop {
        let hq = power_subgroup(h, q, cap)?;
        let with_d = subgroup_product(&hq, &d, cap)?;
        ab_profile.push(with_d.log_order() - d.log_order());
        if q > 1 {
            power_orders.push(hq.order());
        }
        if hq.is_trivial() {
            break;
        }
        q *= p;
    }
    Ok(IsoType::Fingerprint(Fingerprint {
        order: h.order(),
        exponent: q,
        center_order: z.order(),
        center: abelian_invariants(&z, cap)?,
        derived_order: d.order(),
        derived: Box::new(fingerprint(&d, cap)?),
        abelianization: invariants_from_profile(p, &ab_profile),
        power_orders,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_engine::parse_presentation;

    fn heis3() -> PcPresentation {
        parse_presentation("p 3\ngens 3\ncomm 2 1 : g3^1\n").unwrap()
    }

    // D16 = <r, s>: g1 = s, g2 = r, g3 = r^2, g4 = r^4.
    fn d16() -> PcPresentation {
        parse_presentation(
            "p 2\ngens 4\npow 2 : g3^1\npow 3 : g4^1\ncomm 2 1 : g3^1 g4^1\ncomm 3 1 : g4^1\n",
        )
        .unwrap()
    }

    fn brute_center(g: &PcPresentation) -> usize {
        let all = Subgroup::whole(g).elements(DEFAULT_CAP).unwrap();
        all.iter()
            .filter(|x| all.iter().all(|y| g.multiply(x, y) == g.multiply(y, x)))
            .count()
    }

    #[test]
    fn heisenberg_closures() {
        let g = heis3();
        assert!(closure(&g, &[], DEFAULT_CAP).unwrap().is_trivial());
        let ab = closure(&g, &[g.generator(0), g.generator(1)], DEFAULT_CAP).unwrap();
        assert_eq!(ab.order(), 27);
        let z = closure(&g, &[g.generator(2)], DEFAULT_CAP).unwrap();
        assert_eq!(z.order(), 3);
        assert_eq!(center(&Subgroup::whole(&g), DEFAULT_CAP).unwrap(), z);
        assert_eq!(brute_center(&g), 3);
        let n = normal_closure(&g, &[g.generator(0)], DEFAULT_CAP).unwrap();
        assert_eq!(n.order(), 9);
        assert!(n.contains(&g.generator(2)));
    }

    #[test]
    fn dihedral_subgroups() {
        let g = d16();
        let r = g.generator(1);
        let r2 = g.power(&r, 2);
        let r4 = g.power(&r, 4);
        let s = g.generator(0);
        let n = normal_closure(&g, std::slice::from_ref(&r2), DEFAULT_CAP).unwrap();
        assert_eq!(n.order(), 4);
        assert_eq!(abelian_invariants(&n, DEFAULT_CAP).unwrap(), vec![4]);
        let c4 = closure(&g, std::slice::from_ref(&r4), DEFAULT_CAP).unwrap();
        assert_eq!(subgroup_product(&c4, &n, DEFAULT_CAP).unwrap(), n);
        let k = closure(&g, &[s, r4], DEFAULT_CAP).unwrap();
        let i = intersection(&n, &k, DEFAULT_CAP).unwrap();
        assert_eq!(i, c4);
        let orders: Vec<u128> = lower_central_series(&g, DEFAULT_CAP)
            .unwrap()
            .iter()
            .map(|h| h.order())
            .collect();
        assert_eq!(orders, vec![16, 4, 2, 1]);
    }

    #[test]
    fn heisenberg_fingerprint() {
        let g = heis3();
        let fp = fingerprint(&Subgroup::whole(&g), DEFAULT_CAP).unwrap();
        assert_eq!(fp.to_string(), "(27,3,3,[3],3,[3],[3,3],[1])");
    }

    #[test]
    fn abelian_invariants_profile() {
        // C9 x C3 as g1^3 = g2.
        let g = parse_presentation("p 3\ngens 3\npow 1 : g2^1\n").unwrap();
        let h = Subgroup::whole(&g);
        assert_eq!(abelian_invariants(&h, DEFAULT_CAP).unwrap(), vec![9, 3]);
        assert_eq!(exponent(&h, DEFAULT_CAP).unwrap(), 9);
        let h3 = power_subgroup(&h, 3, DEFAULT_CAP).unwrap();
        assert_eq!(h3.order(), 3);
        assert!(abelian_invariants(&Subgroup::whole(&heis3()), DEFAULT_CAP).is_err());
    }

    #[test]
    fn parse_iso_strings() {
        assert_eq!(
            IsoType::parse_abelian("C3xC9"),
            Some(IsoType::Abelian(vec![9, 3]))
        );
        assert_eq!(IsoType::parse_abelian("1"), Some(IsoType::trivial()));
        assert_eq!(
            IsoType::parse_abelian("C9xC3").unwrap().to_string(),
            "C9xC3"
        );
        assert_eq!(IsoType::parse_abelian("Z9"), None);
    }
}
