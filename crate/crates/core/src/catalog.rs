//! Named groups: standard families, the explicit presentations from the
//! classification, and presentations imported from data files. Also the
//! invariant-table check for imported groups.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{is_prime, Error, Result};
use crate::group_engine::{parse_presentation_file, Element, PcPresentation};
use crate::structure::{
    center, derived_subgroup, exponent, fingerprint, intersection, power_subgroup, IsoType,
    Subgroup,
};

/// Theorem items that come with an explicit presentation.
pub const PAPER_ITEMS: [u32; 3] = [46, 66, 67];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Source {
    Builder(String),
    PaperItem(u32),
    Imported(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Ordinary test material.
    Plain,
    /// Expected to have `t^L = 10p − 8` and match a condition.
    Witness,
    /// Has `t^L = 10p − 8` but matches no condition.
    CounterexampleCandidate,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub source: Source,
    pub presentation: PcPresentation,
    pub small_group_id: Option<(u64, u64)>,
    /// Table columns keyed as in the data files, e.g. `Gp5 -> C5xC5`.
    pub expected: BTreeMap<String, String>,
    pub role: Role,
}

impl CatalogEntry {
    fn built(name: String, source: Source, presentation: PcPresentation) -> Self {
        CatalogEntry {
            name,
            source,
            presentation,
            small_group_id: None,
            expected: BTreeMap::new(),
            role: Role::Plain,
        }
    }

    pub fn p(&self) -> u32 {
        self.presentation.p()
    }

    pub fn order(&self) -> u128 {
        self.presentation.order()
    }
}

/// Incremental presentation assembly with 0-based generator indices.
struct Builder {
    p: u32,
    n: usize,
    powers: BTreeMap<usize, Element>,
    comms: BTreeMap<(usize, usize), Element>,
}

impl Builder {
    fn new(p: u32, n: usize) -> Self {
        Builder {
            p,
            n,
            powers: BTreeMap::new(),
            comms: BTreeMap::new(),
        }
    }

    fn word(&self, pairs: &[(usize, u32)]) -> Element {
        let mut w = vec![0u8; self.n];
        for &(k, e) in pairs {
            w[k] = (e % self.p) as u8;
        }
        Element(w)
    }

    fn pow(&mut self, i: usize, pairs: &[(usize, u32)]) {
        let w = self.word(pairs);
        self.powers.insert(i, w);
    }

    fn comm(&mut self, j: usize, i: usize, pairs: &[(usize, u32)]) {
        let w = self.word(pairs);
        self.comms.insert((j, i), w);
    }

    fn finish(self) -> Result<PcPresentation> {
        PcPresentation::new(self.p, self.n, &self.powers, &self.comms)
    }
}

/// `(p, k)` with `n = p^k`, `k ≥ 1`.
fn prime_power(n: u64) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1 && p <= 255).then_some((p as u32, k))
}

/// Direct product of cyclic groups of the given p-power orders.
pub fn build_abelian(p: u32, factors: &[u64]) -> Result<CatalogEntry> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let mut exps = Vec::new();
    for &f in factors {
        match prime_power(f) {
            Some((q, k)) if q == p => exps.push(k as usize),
            _ => {
                return Err(Error::InvalidParams(format!(
                    "{f} is not a power of {p} above 1"
                )))
            }
        }
    }
    let n = exps.iter().sum();
    let mut b = Builder::new(p, n);
    let mut start = 0;
    for &k in &exps {
        for i in start..start + k - 1 {
            b.pow(i, &[(i + 1, 1)]);
        }
        start += k;
    }
    let mut sorted = factors.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let name = format!(
        "abelian:{}",
        sorted
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(CatalogEntry::built(
        name.clone(),
        Source::Builder(name),
        b.finish()?,
    ))
}

/// Rotation `r` of order `2^{n-1}` as generators `g_2 … g_n` with
/// `g_k = r^{2^{k-2}}`; returns the normal word of `r^e`.
fn rotation_word(n: usize, e: u64) -> Vec<(usize, u32)> {
    let order = 1u64 << (n - 1);
    let e = e % order;
    (1..n)
        .filter(|&k| e >> (k - 1) & 1 == 1)
        .map(|k| (k, 1))
        .collect()
}

fn two_generator_2group(order: u64, quaternion: bool) -> Result<PcPresentation> {
    let n = match prime_power(order) {
        Some((2, k)) if k >= 3 => k as usize,
        _ => {
            return Err(Error::InvalidParams(format!(
                "order {order} must be a power of 2, at least 8"
            )))
        }
    };
    let rot = 1u64 << (n - 1);
    let mut b = Builder::new(2, n);
    if quaternion {
        b.pow(0, &rotation_word(n, rot / 2));
    }
    for k in 1..n - 1 {
        b.pow(k, &[(k + 1, 1)]);
    }
    // [r^a, s] = r^{-2a}
    for k in 1..n {
        let a = 1u64 << (k - 1);
        let w = rotation_word(n, rot - (2 * a) % rot);
        if !w.is_empty() {
            b.comm(k, 0, &w);
        }
    }
    b.finish()
}

pub fn build_dihedral(order: u64) -> Result<CatalogEntry> {
    let name = format!("dihedral:{order}");
    let g = two_generator_2group(order, false)?;
    Ok(CatalogEntry::built(name.clone(), Source::Builder(name), g))
}

pub fn build_quaternion(order: u64) -> Result<CatalogEntry> {
    let name = format!("quaternion:{order}");
    let g = two_generator_2group(order, true)?;
    Ok(CatalogEntry::built(name.clone(), Source::Builder(name), g))
}

/// Order `p^3`, `[b, a] = c` central, `p`-th powers trivial.
pub fn build_heisenberg(p: u32) -> Result<CatalogEntry> {
    let name = format!("heisenberg:{p}");
    let mut b = Builder::new(p, 3);
    b.comm(1, 0, &[(2, 1)]);
    Ok(CatalogEntry::built(
        name.clone(),
        Source::Builder(name),
        b.finish()?,
    ))
}

/// Heisenberg group times `(C_p)^k`.
pub fn build_heisenberg_times_elementary(p: u32, k: usize) -> Result<CatalogEntry> {
    let name = format!("heisenberg_x_elementary:{p},{k}");
    let mut b = Builder::new(p, 3 + k);
    b.comm(1, 0, &[(2, 1)]);
    Ok(CatalogEntry::built(
        name.clone(),
        Source::Builder(name),
        b.finish()?,
    ))
}

/// Extraspecial of order `p^5` and exponent `p` (for odd `p`): the central
/// product of two Heisenberg groups.
pub fn build_extraspecial5(p: u32) -> Result<CatalogEntry> {
    let name = format!("extraspecial5:{p}");
    let mut b = Builder::new(p, 5);
    b.comm(1, 0, &[(4, 1)]);
    b.comm(3, 2, &[(4, 1)]);
    Ok(CatalogEntry::built(
        name.clone(),
        Source::Builder(name),
        b.finish()?,
    ))
}

/// Generators `g_1 … g_k` of order `p` and central `c_ij = [g_j, g_i]` of
/// order `p`, so `G′ ≅ (C_p)^{k(k-1)/2}` and `γ_3 = 1`.
pub fn build_free_class2(p: u32, k: usize) -> Result<CatalogEntry> {
    if !(1..=5).contains(&k) {
        return Err(Error::InvalidParams(format!("rank {k} outside 1..=5")));
    }
    let name = format!("free_class2:{p},{k}");
    let m = k * (k - 1) / 2;
    let mut b = Builder::new(p, k + m);
    let mut c = k;
    for i in 0..k {
        for j in i + 1..k {
            b.comm(j, i, &[(c, 1)]);
            c += 1;
        }
    }
    let mut e = CatalogEntry::built(name.clone(), Source::Builder(name), b.finish()?);
    if p == 2 && k == 5 {
        e.role = Role::Witness;
    }
    Ok(e)
}

/// The groups written out explicitly in items 46, 66 and 67, with
/// generators `a, b, c, …` in that pc order.
pub fn build_paper_presentation(item: u32, p: u32) -> Result<CatalogEntry> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let b = match item {
        // <a,b,e | [b,a] = e> × <c,d>, relabelled a,b,c,d,e
        46 => {
            let mut b = Builder::new(p, 5);
            b.comm(1, 0, &[(4, 1)]);
            b
        }
        66 => {
            let mut b = Builder::new(p, 7);
            b.comm(1, 0, &[(2, 1)]);
            b
        }
        67 => {
            let mut b = Builder::new(p, 7);
            b.comm(1, 0, &[(4, 1)]);
            b.comm(3, 2, &[(4, 1)]);
            b
        }
        other => return Err(Error::UnsupportedItem(other)),
    };
    let g = b.finish()?;
    Ok(CatalogEntry::built(
        format!("paper_item:{item},{p}"),
        Source::PaperItem(item),
        g,
    ))
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidParams(format!("bad number `{t}`")))
        })
        .collect()
}

/// Builds from a `name:params` spec such as `dihedral:16`, `abelian:9,3`,
/// `free_class2:2,5` or `paper_item:66,3`.
pub fn build_from_spec(spec: &str) -> Result<CatalogEntry> {
    let (name, params) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidParams(format!("builder `{spec}` needs name:params")))?;
    let v = parse_list(params)?;
    let need = |k: usize| -> Result<()> {
        if v.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "{name} takes {k} parameter(s)"
            )))
        }
    };
    match name {
        "abelian" => {
            let p = prime_power(*v.first().unwrap_or(&0))
                .ok_or_else(|| Error::InvalidParams("abelian factors must be prime powers".into()))?
                .0;
            build_abelian(p, &v)
        }
        "dihedral" => {
            need(1)?;
            build_dihedral(v[0])
        }
        "quaternion" => {
            need(1)?;
            build_quaternion(v[0])
        }
        "heisenberg" => {
            need(1)?;
            build_heisenberg(v[0] as u32)
        }
        "heisenberg_x_elementary" => {
            need(2)?;
            build_heisenberg_times_elementary(v[0] as u32, v[1] as usize)
        }
        "extraspecial5" => {
            need(1)?;
            build_extraspecial5(v[0] as u32)
        }
        "free_class2" => {
            need(2)?;
            build_free_class2(v[0] as u32, v[1] as usize)
        }
        "paper_item" => {
            need(2)?;
            build_paper_presentation(v[0] as u32, v[1] as u32)
        }
        other => Err(Error::InvalidParams(format!("unknown builder `{other}`"))),
    }
}

/// Every partition of `k`, largest parts first.
fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// All abelian `p`-groups of order `p^k` for `1 ≤ k ≤ max_k`.
pub fn all_abelian(p: u32, max_k: u32) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        for part in partitions(k) {
            let factors: Vec<u64> = part.iter().map(|&e| (p as u64).pow(e)).collect();
            out.push(build_abelian(p, &factors)?);
        }
    }
    Ok(out)
}

/// The built-in entries, sorted by name.
pub fn builtin_catalog() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for n in [8, 16, 32] {
        out.push(build_dihedral(n)?);
    }
    for n in [8, 16] {
        out.push(build_quaternion(n)?);
    }
    for p in [2, 3, 5, 7] {
        out.push(build_heisenberg(p)?);
    }
    out.extend(all_abelian(2, 6)?);
    out.extend(all_abelian(3, 3)?);
    out.extend(all_abelian(5, 2)?);
    out.push(build_heisenberg_times_elementary(3, 1)?);
    out.push(build_heisenberg_times_elementary(3, 2)?);
    out.push(build_extraspecial5(3)?);
    out.push(build_free_class2(2, 3)?);
    out.push(build_free_class2(2, 4)?);
    out.push(build_free_class2(2, 5)?);
    out.push(build_free_class2(3, 3)?);
    for item in PAPER_ITEMS {
        out.push(build_paper_presentation(item, 3)?);
    }
    out.push(build_paper_presentation(46, 5)?);
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// Reads one presentation file. The entry is named after the file stem.
pub fn import_presentation(path: &Path) -> Result<CatalogEntry> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let file = parse_presentation_file(&text)?;
    let g = file.presentation;
    if let Some((order, _)) = file.small_group_id {
        if order as u128 != g.order() {
            return Err(Error::InvalidParams(format!(
                "{}: declared order {order} but the presentation has order {}",
                path.display(),
                g.order()
            )));
        }
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(CatalogEntry {
        name,
        source: Source::Imported(path.to_path_buf()),
        presentation: g,
        small_group_id: file.small_group_id,
        expected: file.expect,
        role: Role::Plain,
    })
}

/// Imports every `*.pc` file in a directory, sorted by name.
pub fn import_dir(dir: &Path) -> Result<Vec<CatalogEntry>> {
    let rd = fs::read_dir(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut paths: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pc"))
        .collect();
    paths.sort();
    let mut out = paths
        .iter()
        .map(|p| import_presentation(p))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// The repository's data directory, for tests and the CLI default.
pub fn default_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// `smallgroups/`, `witnesses/` and `counterexamples/` under a data
/// directory, with roles taken from the directory. A missing `witnesses/`
/// is allowed.
pub fn load_data_catalog(data_dir: &Path) -> Result<Vec<CatalogEntry>> {
    let mut out = import_dir(&data_dir.join("smallgroups"))?;
    let witnesses = data_dir.join("witnesses");
    if witnesses.is_dir() {
        for mut e in import_dir(&witnesses)? {
            e.role = Role::Witness;
            out.push(e);
        }
    }
    for mut e in import_dir(&data_dir.join("counterexamples"))? {
        e.role = Role::CounterexampleCandidate;
        out.push(e);
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnCheck {
    pub key: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRowReport {
    pub name: String,
    pub columns: Vec<ColumnCheck>,
    pub pass: bool,
}

/// The table columns computed for `H`, keyed as in the data files.
pub fn table_columns(g: &PcPresentation, cap: usize) -> Result<BTreeMap<String, String>> {
    let p = g.p();
    let h = Subgroup::whole(g);
    let hp = power_subgroup(&h, p as u64, cap)?;
    let z = center(&h, cap)?;
    let d = derived_subgroup(&h, cap)?;
    let mut out = BTreeMap::new();
    let iso = |s: &Subgroup| -> Result<String> { Ok(fingerprint(s, cap)?.to_string()) };
    out.insert(format!("Gp{p}"), iso(&hp)?);
    out.insert("expG".to_string(), exponent(&h, cap)?.to_string());
    out.insert("ZG".to_string(), iso(&z)?);
    out.insert("Gpp".to_string(), iso(&d)?);
    out.insert(format!("Gpp_cap_Gp{p}"), iso(&intersection(&d, &hp, cap)?)?);
    out.insert("Gpp_cap_ZG".to_string(), iso(&intersection(&d, &z, cap)?)?);
    out.insert(format!("Gp{p}_cap_ZG"), iso(&intersection(&hp, &z, cap)?)?);
    Ok(out)
}

fn normalize(value: &str) -> String {
    IsoType::parse_abelian(value)
        .map(|t| t.to_string())
        .unwrap_or_else(|| value.to_string())
}

/// Compares every expected column of every entry that has some.
pub fn verify_tables(entries: &[CatalogEntry], cap: usize) -> Result<Vec<TableRowReport>> {
    let mut out = Vec::new();
    for e in entries.iter().filter(|e| !e.expected.is_empty()) {
        out.push(verify_table_row(e, cap)?);
    }
    Ok(out)
}

pub fn verify_table_row(e: &CatalogEntry, cap: usize) -> Result<TableRowReport> {
    let computed = table_columns(&e.presentation, cap)?;
    let columns: Vec<ColumnCheck> = e
        .expected
        .iter()
        .map(|(key, want)| {
            let got = computed.get(key).cloned().unwrap_or_else(|| "?".into());
            ColumnCheck {
                key: key.clone(),
                expected: want.clone(),
                pass: normalize(want) == got,
                computed: got,
            }
        })
        .collect();
    Ok(TableRowReport {
        name: e.name.clone(),
        pass: columns.iter().all(|c| c.pass),
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{abelian_invariants, lower_central_series, DEFAULT_CAP};

    #[test]
    fn abelian_round_trip() {
        let e = build_abelian(3, &[9, 3]).unwrap();
        assert_eq!(e.presentation.ngens(), 3);
        let inv = abelian_invariants(&Subgroup::whole(&e.presentation), DEFAULT_CAP).unwrap();
        assert_eq!(inv, vec![9, 3]);
        assert!(build_abelian(3, &[6]).is_err());
        let e = build_abelian(5, &[25, 5, 5, 5, 5]).unwrap();
        assert_eq!(e.order(), 5u128.pow(6));
    }

    #[test]
    fn families() {
        let d8 = build_dihedral(8).unwrap();
        assert_eq!(d8.presentation.ngens(), 3);
        let orders = |e: &CatalogEntry| -> Vec<u128> {
            lower_central_series(&e.presentation, DEFAULT_CAP)
                .unwrap()
                .iter()
                .map(|h| h.order())
                .collect()
        };
        assert_eq!(orders(&d8), vec![8, 2, 1]);
        assert_eq!(orders(&build_dihedral(32).unwrap()), vec![32, 8, 4, 2, 1]);
        assert_eq!(orders(&build_quaternion(16).unwrap()), vec![16, 4, 2, 1]);
        let h5 = build_heisenberg(5).unwrap();
        assert_eq!(
            exponent(&Subgroup::whole(&h5.presentation), DEFAULT_CAP).unwrap(),
            5
        );
        assert!(build_dihedral(12).is_err());
        assert!(build_free_class2(2, 6).is_err());
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = build_quaternion(8).unwrap().presentation;
        let invols = Subgroup::whole(&q)
            .elements(64)
            .unwrap()
            .iter()
            .filter(|x| q.element_order(x) == 2)
            .count();
        assert_eq!(invols, 1);
    }

    #[test]
    fn spec_strings() {
        assert_eq!(build_from_spec("dihedral:16").unwrap().order(), 16);
        assert_eq!(build_from_spec("abelian:3,9").unwrap().name, "abelian:9,3");
        assert_eq!(
            build_from_spec("paper_item:66,3").unwrap().order(),
            3u128.pow(7)
        );
        assert!(matches!(
            build_from_spec("paper_item:65,3"),
            Err(Error::UnsupportedItem(65))
        ));
        assert!(build_from_spec("nonsense").is_err());
    }

    #[test]
    fn item_presentations() {
        let g66 = build_paper_presentation(66, 3).unwrap().presentation;
        let whole = Subgroup::whole(&g66);
        let d = derived_subgroup(&whole, DEFAULT_CAP).unwrap();
        assert_eq!(g66.order(), 3u128.pow(7));
        assert_eq!(abelian_invariants(&d, DEFAULT_CAP).unwrap(), vec![3]);
        assert!(d.contains(&g66.generator(2)));

        // a, b, c, d each fail to commute with a partner; e, f, g occur in
        // no relation. So the center is <e, f, g> of order 27.
        let g67 = build_paper_presentation(67, 3).unwrap().presentation;
        let whole = Subgroup::whole(&g67);
        let z = center(&whole, DEFAULT_CAP).unwrap();
        assert_eq!(z.order(), 27);
        for i in 4..7 {
            assert!(z.contains(&g67.generator(i)));
        }
        let d = derived_subgroup(&whole, DEFAULT_CAP).unwrap();
        assert_eq!(d.order(), 3);
        assert!(d.contains(&g67.generator(4)));

        let g46 = build_paper_presentation(46, 5).unwrap().presentation;
        let z = center(&Subgroup::whole(&g46), DEFAULT_CAP).unwrap();
        for i in 2..5 {
            assert!(z.contains(&g46.generator(i)));
        }
        assert!(matches!(
            build_paper_presentation(46, 4),
            Err(Error::NotPrime(4))
        ));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=6).map(|k| partitions(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
    }
}
