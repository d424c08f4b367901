//! Finite p-groups given by polycyclic presentations, with collection-based
//! normal-form arithmetic.
//!
//! Generators are `g_1, …, g_n` in the text format and `0..n` in code. The
//! group commutator is `[x, y] = x⁻¹y⁻¹xy`, so `g_j g_i = g_i g_j [g_j, g_i]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{is_prime, Error, Result};

/// A group element as its normal-form exponent vector `g_1^e_1 ⋯ g_n^e_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Element(pub Vec<u8>);

impl Element {
    pub fn identity(ngens: usize) -> Self {
        Element(vec![0; ngens])
    }

    /// The generator `g_i` (0-based).
    pub fn generator(ngens: usize, i: usize) -> Self {
        let mut v = vec![0; ngens];
        v[i] = 1;
        Element(v)
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Text-format word, e.g. `g2^1 g4^2`, or `1`.
    pub fn to_word(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(k, &e)| format!("g{}^{}", k + 1, e))
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word())
    }
}

#[derive(Debug)]
struct PcData {
    p: u32,
    ngens: usize,
    power: Vec<Element>,
    // comm[j][i] for j > i
    comm: Vec<Vec<Option<Element>>>,
    // conj[k][i] = g_k^{g_i} = g_k [g_k, g_i] for k > i
    conj: Vec<Vec<Element>>,
    // g_i commutes with every later generator
    central_after: Vec<bool>,
}

/// A consistent polycyclic presentation of a group of order `p^ngens`.
///
/// Cloning is cheap; the relation tables are shared.
#[derive(Debug, Clone)]
pub struct PcPresentation {
    inner: Arc<PcData>,
}

impl PartialEq for PcPresentation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.power == other.inner.power
                && self.inner.comm == other.inner.comm)
    }
}

impl Eq for PcPresentation {}

impl PcPresentation {
    /// Builds and consistency-checks a presentation. `powers` maps `i` to the
    /// word for `g_i^p`; `comms` maps `(j, i)` with `j > i` to `[g_j, g_i]`.
    /// Missing entries are trivial.
    pub fn new(
        p: u32,
        ngens: usize,
        powers: &BTreeMap<usize, Element>,
        comms: &BTreeMap<(usize, usize), Element>,
    ) -> Result<Self> {
        let pres = Self::new_unchecked(p, ngens, powers, comms)?;
        pres.check_consistency()?;
        Ok(pres)
    }

    /// Validates shapes and supports but skips the overlap test.
    pub(crate) fn new_unchecked(
        p: u32,
        ngens: usize,
        powers: &BTreeMap<usize, Element>,
        comms: &BTreeMap<(usize, usize), Element>,
    ) -> Result<Self> {
        if p > 255 || !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let check_word = |w: &Element, after: usize, what: String| -> Result<()> {
            if w.0.len() != ngens {
                return Err(Error::InvalidParams(format!(
                    "{what}: word of wrong length"
                )));
            }
            if let Some(k) = w.0.iter().position(|&e| e != 0) {
                if k <= after {
                    return Err(Error::RelationSupport {
                        line: 0,
                        detail: format!("{what} involves g{}", k + 1),
                    });
                }
            }
            if let Some(&e) = w.0.iter().find(|&&e| e as u32 >= p) {
                return Err(Error::ExponentRange {
                    line: 0,
                    exponent: e as u64,
                    p,
                });
            }
            Ok(())
        };
        let mut power = vec![Element::identity(ngens); ngens];
        for (&i, w) in powers {
            if i >= ngens {
                return Err(Error::InvalidParams(format!(
                    "power relation for g{}",
                    i + 1
                )));
            }
            check_word(w, i, format!("g{}^p", i + 1))?;
            power[i] = w.clone();
        }
        let mut comm = vec![vec![None; ngens]; ngens];
        for (&(j, i), w) in comms {
            if j >= ngens || i >= j {
                return Err(Error::RelationSupport {
                    line: 0,
                    detail: format!("[g{}, g{}] needs the first index larger", j + 1, i + 1),
                });
            }
            check_word(w, j, format!("[g{}, g{}]", j + 1, i + 1))?;
            if !w.is_identity() {
                comm[j][i] = Some(w.clone());
            }
        }
        let central_after = (0..ngens)
            .map(|i| (i + 1..ngens).all(|k| comm[k][i].is_none()))
            .collect();
        let mut data = PcData {
            p,
            ngens,
            power,
            comm,
            conj: vec![Vec::new(); ngens],
            central_after,
        };
        // conj[·][i] only needs conj[·][l] for l > i, so fill columns from the top.
        let mut conj = vec![vec![Element::identity(ngens); ngens]; ngens];
        for i in (0..ngens).rev() {
            for k in i + 1..ngens {
                let mut w = Element::generator(ngens, k).0;
                if let Some(c) = &data.comm[k][i] {
                    mul_word(&data, &mut w, &c.0);
                }
                conj[k][i] = Element(w);
            }
            data.conj = conj.clone();
        }
        data.conj = conj;
        Ok(PcPresentation {
            inner: Arc::new(data),
        })
    }

    /// `G / ⟨g_{keep+1}, …, g_n⟩` on the first `keep` generators. The tail
    /// is always normal since relations only involve later generators.
    pub fn quotient_by_tail(&self, keep: usize) -> Result<PcPresentation> {
        let n = self.ngens();
        if keep > n {
            return Err(Error::InvalidParams(format!(
                "cannot keep {keep} of {n} generators"
            )));
        }
        let cut = |w: &Element| Element(w.0[..keep].to_vec());
        let powers = (0..keep)
            .map(|i| (i, cut(self.power_relation(i))))
            .collect();
        let mut comms = BTreeMap::new();
        for j in 0..keep {
            for i in 0..j {
                if let Some(w) = self.commutator_relation(j, i) {
                    comms.insert((j, i), cut(w));
                }
            }
        }
        PcPresentation::new(self.p(), keep, &powers, &comms)
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn ngens(&self) -> usize {
        self.inner.ngens
    }

    /// `p^ngens`.
    pub fn order(&self) -> u128 {
        (self.p() as u128).pow(self.ngens() as u32)
    }

    pub fn power_relation(&self, i: usize) -> &Element {
        &self.inner.power[i]
    }

    /// `[g_j, g_i]` for `j > i`, `None` when they commute.
    pub fn commutator_relation(&self, j: usize, i: usize) -> Option<&Element> {
        self.inner.comm[j][i].as_ref()
    }

    pub fn identity(&self) -> Element {
        Element::identity(self.ngens())
    }

    pub fn generator(&self, i: usize) -> Element {
        Element::generator(self.ngens(), i)
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.ngens()).map(|i| self.generator(i)).collect()
    }

    /// Whether every pair of generators commutes.
    pub fn is_abelian(&self) -> bool {
        self.inner.central_after.iter().all(|&c| c)
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        let mut w = x.0.clone();
        mul_word(&self.inner, &mut w, &y.0);
        Element(w)
    }

    /// `x := x · g_i`.
    pub fn mul_gen_in_place(&self, x: &mut Element, i: usize) {
        mul_gen(&self.inner, &mut x.0, i);
    }

    pub fn inverse(&self, x: &Element) -> Element {
        let d = &*self.inner;
        let mut w = x.0.clone();
        let mut y = vec![0u8; d.ngens];
        for i in 0..d.ngens {
            let e = w[i];
            if e != 0 {
                let k = (d.p - e as u32) as u8;
                for _ in 0..k {
                    mul_gen(d, &mut w, i);
                }
                y[i] = k;
            }
        }
        debug_assert!(w.iter().all(|&e| e == 0));
        Element(y)
    }

    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        let xi = self.inverse(x);
        let yi = self.inverse(y);
        let a = self.multiply(&xi, &yi);
        let b = self.multiply(&a, x);
        self.multiply(&b, y)
    }

    /// `y⁻¹ x y`.
    pub fn conjugate(&self, x: &Element, y: &Element) -> Element {
        let yi = self.inverse(y);
        let a = self.multiply(&yi, x);
        self.multiply(&a, y)
    }

    pub fn power(&self, x: &Element, n: i64) -> Element {
        let base = if n < 0 { self.inverse(x) } else { x.clone() };
        let mut e = n.unsigned_abs();
        let mut result = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = self.multiply(&result, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.multiply(&sq, &sq);
            }
        }
        result
    }

    /// Least `k ≥ 1` with `x^k = 1`; always a power of `p`.
    pub fn element_order(&self, x: &Element) -> u64 {
        let mut y = x.clone();
        let mut order = 1u64;
        while !y.is_identity() {
            y = self.power(&y, self.p() as i64);
            order *= self.p() as u64;
        }
        order
    }

    /// Mixed-radix index of an element, `g_1` most significant, so that key
    /// order equals lexicographic order of exponent vectors.
    pub fn key(&self, x: &Element) -> u64 {
        let p = self.p() as u64;
        x.0.iter().fold(0u64, |acc, &e| acc * p + e as u64)
    }

    pub fn element_of_key(&self, mut k: u64) -> Element {
        let p = self.p() as u64;
        let mut v = vec![0u8; self.ngens()];
        for slot in v.iter_mut().rev() {
            *slot = (k % p) as u8;
            k /= p;
        }
        Element(v)
    }

    /// Collects the standard overlaps two ways and compares normal forms.
    pub fn check_consistency(&self) -> Result<()> {
        let d = &*self.inner;
        let n = d.ngens;
        let p = d.p as u8;
        let e = |i: usize| Element::generator(n, i).0;
        let fail = |what: String, a: &[u8], b: &[u8]| {
            Error::Inconsistent(format!(
                "overlap {what}: {} vs {}",
                Element(a.to_vec()),
                Element(b.to_vec())
            ))
        };
        // (g_k g_j) g_i = g_k (g_j g_i)
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let mut lhs = e(k);
                    mul_gen(d, &mut lhs, j);
                    mul_gen(d, &mut lhs, i);
                    let mut u = e(j);
                    mul_gen(d, &mut u, i);
                    let mut rhs = e(k);
                    mul_word(d, &mut rhs, &u);
                    if lhs != rhs {
                        return Err(fail(
                            format!("(g{} g{}) g{}", k + 1, j + 1, i + 1),
                            &lhs,
                            &rhs,
                        ));
                    }
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                // (g_j^p) g_i = g_j^(p-1) (g_j g_i)
                let mut lhs = d.power[j].0.clone();
                mul_gen(d, &mut lhs, i);
                let mut u = e(j);
                mul_gen(d, &mut u, i);
                let mut rhs = vec![0u8; n];
                rhs[j] = p - 1;
                mul_word(d, &mut rhs, &u);
                if lhs != rhs {
                    return Err(fail(format!("g{}^p g{}", j + 1, i + 1), &lhs, &rhs));
                }
                // g_j (g_i^p) = (g_j g_i) g_i^(p-1)
                let mut lhs = e(j);
                mul_word(d, &mut lhs, &d.power[i].0);
                let mut rhs = e(j);
                for _ in 0..p {
                    mul_gen(d, &mut rhs, i);
                }
                if lhs != rhs {
                    return Err(fail(format!("g{} g{}^p", j + 1, i + 1), &lhs, &rhs));
                }
            }
        }
        // g_i (g_i^p) = (g_i^p) g_i
        for i in 0..n {
            let mut lhs = e(i);
            mul_word(d, &mut lhs, &d.power[i].0);
            let mut rhs = d.power[i].0.clone();
            mul_gen(d, &mut rhs, i);
            if lhs != rhs {
                return Err(fail(format!("g{} g{}^p", i + 1, i + 1), &lhs, &rhs));
            }
        }
        Ok(())
    }

    /// Serializes to the text format (without `id`/`expect` lines).
    pub fn to_text(&self) -> String {
        let mut s = format!("p {}\ngens {}\n", self.p(), self.ngens());
        for i in 0..self.ngens() {
            let w = &self.inner.power[i];
            if !w.is_identity() {
                s.push_str(&format!("pow {} : {}\n", i + 1, w));
            }
        }
        for i in 0..self.ngens() {
            for j in i + 1..self.ngens() {
                if let Some(w) = &self.inner.comm[j][i] {
                    s.push_str(&format!("comm {} {} : {}\n", j + 1, i + 1, w));
                }
            }
        }
        s
    }
}

/// `w := w · g_i`, for `w` a normal word.
fn mul_gen(d: &PcData, w: &mut [u8], i: usize) {
    let n = d.ngens;
    let needs_conj = !d.central_after[i] && (i + 1..n).any(|k| w[k] != 0 && d.comm[k][i].is_some());
    if needs_conj {
        // tail · g_i = g_i · tail^{g_i}
        let mut t = vec![0u8; n];
        for k in i + 1..n {
            for _ in 0..w[k] {
                mul_word(d, &mut t, &d.conj[k][i].0);
            }
        }
        w[i + 1..].copy_from_slice(&t[i + 1..]);
    }
    if (w[i] as u32) + 1 < d.p {
        w[i] += 1;
    } else {
        w[i] = 0;
        let pw = &d.power[i].0;
        if !pw.iter().all(|&e| e == 0) {
            // tail := g_i^p · tail
            let mut t = pw.clone();
            let mut tail = vec![0u8; n];
            tail[i + 1..].copy_from_slice(&w[i + 1..]);
            mul_word(d, &mut t, &tail);
            w[i + 1..].copy_from_slice(&t[i + 1..]);
        }
    }
}

/// `w := w · y`, one generator at a time.
fn mul_word(d: &PcData, w: &mut [u8], y: &[u8]) {
    for (k, &e) in y.iter().enumerate() {
        for _ in 0..e {
            mul_gen(d, w, k);
        }
    }
}

/// A parsed presentation file with its optional metadata.
#[derive(Debug, Clone)]
pub struct PresentationFile {
    pub presentation: PcPresentation,
    pub small_group_id: Option<(u64, u64)>,
    pub expect: BTreeMap<String, String>,
    /// Comment lines, without the leading `#`.
    pub comments: Vec<String>,
}

/// Parses only the group; `id`, `expect` and comments are accepted and dropped.
pub fn parse_presentation(text: &str) -> Result<PcPresentation> {
    parse_presentation_file(text).map(|f| f.presentation)
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Tokens of a line with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..idx]));
            }
        } else if start.is_none() {
            start = Some(idx);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_u64(tok: (usize, &str), line: usize, what: &str) -> Result<u64> {
    tok.1
        .parse::<u64>()
        .map_err(|_| syntax(line, tok.0, format!("expected {what}, found `{}`", tok.1)))
}

fn parse_gen_index(tok: (usize, &str), line: usize, n: usize) -> Result<usize> {
    let v = parse_u64(tok, line, "generator index")? as usize;
    if v == 0 || v > n {
        return Err(syntax(
            line,
            tok.0,
            format!("generator index {v} outside 1..={n}"),
        ));
    }
    Ok(v - 1)
}

fn parse_word(toks: &[(usize, &str)], line: usize, p: u32, n: usize) -> Result<Element> {
    let mut w = vec![0u8; n];
    if toks.is_empty() {
        return Err(syntax(line, 0, "missing word after `:`"));
    }
    if toks.len() == 1 && toks[0].1 == "1" {
        return Ok(Element(w));
    }
    let mut last: Option<usize> = None;
    for &(col, t) in toks {
        let body = t
            .strip_prefix('g')
            .ok_or_else(|| syntax(line, col, format!("expected `gK^e`, found `{t}`")))?;
        let (idx, exp) = match body.split_once('^') {
            Some((a, b)) => (a, b),
            None => (body, "1"),
        };
        let k = parse_gen_index((col, idx), line, n)?;
        let e = parse_u64((col, exp), line, "exponent")?;
        if e >= p as u64 {
            return Err(Error::ExponentRange {
                line,
                exponent: e,
                p,
            });
        }
        if let Some(prev) = last {
            if k <= prev {
                return Err(syntax(line, col, "generator indices must increase"));
            }
        }
        last = Some(k);
        w[k] = e as u8;
    }
    Ok(Element(w))
}

/// Parses the full text format:
///
/// ```text
/// p <prime>
/// gens <n>
/// pow i : w
/// comm j i : w
/// id <order> <number>
/// expect <key> <value>
/// ```
///
/// with `#` comments and blank lines allowed anywhere.
pub fn parse_presentation_file(text: &str) -> Result<PresentationFile> {
    let mut p: Option<u32> = None;
    let mut n: Option<usize> = None;
    let mut powers = BTreeMap::new();
    let mut comms = BTreeMap::new();
    let mut small_group_id = None;
    let mut expect = BTreeMap::new();
    let mut comments = Vec::new();
    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let toks = tokens(raw);
        let head = toks[0];
        match (p, n, head.1) {
            (None, _, "p") => {
                let t = *toks
                    .get(1)
                    .ok_or_else(|| syntax(ln, head.0, "missing prime"))?;
                let v = parse_u64(t, ln, "prime")?;
                if v > 255 || !is_prime(v) {
                    return Err(Error::NotPrime(v));
                }
                if toks.len() > 2 {
                    return Err(syntax(ln, toks[2].0, "trailing input"));
                }
                p = Some(v as u32);
            }
            (None, _, _) => return Err(syntax(ln, head.0, "first line must be `p <prime>`")),
            (Some(_), None, "gens") => {
                let t = *toks
                    .get(1)
                    .ok_or_else(|| syntax(ln, head.0, "missing count"))?;
                let v = parse_u64(t, ln, "generator count")?;
                if v > 64 {
                    return Err(syntax(ln, t.0, "too many generators"));
                }
                if toks.len() > 2 {
                    return Err(syntax(ln, toks[2].0, "trailing input"));
                }
                n = Some(v as usize);
            }
            (Some(_), None, _) => return Err(syntax(ln, head.0, "second line must be `gens <n>`")),
            (Some(p), Some(n), "pow") => {
                let colon = toks.iter().position(|t| t.1 == ":");
                if colon != Some(2) {
                    return Err(syntax(ln, head.0, "expected `pow i : w`"));
                }
                let i = parse_gen_index(toks[1], ln, n)?;
                let w = parse_word(&toks[3..], ln, p, n)?;
                if let Some(k) = w.0.iter().position(|&e| e != 0) {
                    if k <= i {
                        return Err(Error::RelationSupport {
                            line: ln,
                            detail: format!("g{}^p involves g{}", i + 1, k + 1),
                        });
                    }
                }
                if powers.insert(i, w).is_some() {
                    return Err(syntax(
                        ln,
                        head.0,
                        format!("duplicate power relation for g{}", i + 1),
                    ));
                }
            }
            (Some(p), Some(n), "comm") => {
                let colon = toks.iter().position(|t| t.1 == ":");
                if colon != Some(3) {
                    return Err(syntax(ln, head.0, "expected `comm j i : w`"));
                }
                let j = parse_gen_index(toks[1], ln, n)?;
                let i = parse_gen_index(toks[2], ln, n)?;
                if j <= i {
                    return Err(Error::RelationSupport {
                        line: ln,
                        detail: format!("[g{}, g{}] must have j > i", j + 1, i + 1),
                    });
                }
                let w = parse_word(&toks[4..], ln, p, n)?;
                if let Some(k) = w.0.iter().position(|&e| e != 0) {
                    if k <= j {
                        return Err(Error::RelationSupport {
                            line: ln,
                            detail: format!("[g{}, g{}] involves g{}", j + 1, i + 1, k + 1),
                        });
                    }
                }
                if comms.insert((j, i), w).is_some() {
                    return Err(syntax(ln, head.0, "duplicate commutator relation"));
                }
            }
            (Some(_), Some(_), "id") => {
                if toks.len() != 3 {
                    return Err(syntax(ln, head.0, "expected `id <order> <number>`"));
                }
                let order = parse_u64(toks[1], ln, "order")?;
                let number = parse_u64(toks[2], ln, "number")?;
                small_group_id = Some((order, number));
            }
            (Some(_), Some(_), "expect") => {
                if toks.len() != 3 {
                    return Err(syntax(ln, head.0, "expected `expect <key> <value>`"));
                }
                expect.insert(toks[1].1.to_string(), toks[2].1.to_string());
            }
            (Some(_), Some(_), other) => {
                return Err(syntax(ln, head.0, format!("unknown directive `{other}`")))
            }
        }
    }
    let p = p.ok_or_else(|| syntax(1, 1, "missing `p <prime>` line"))?;
    let n = n.ok_or_else(|| syntax(1, 1, "missing `gens <n>` line"))?;
    let presentation = PcPresentation::new(p, n, &powers, &comms)?;
    Ok(PresentationFile {
        presentation,
        small_group_id,
        expect,
        comments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_quotients() {
        let d16 = parse_presentation(
            "p 2\ngens 4\npow 2 : g3^1\npow 3 : g4^1\ncomm 2 1 : g3^1 g4^1\ncomm 3 1 : g4^1\n",
        )
        .unwrap();
        let d8 = d16.quotient_by_tail(3).unwrap();
        assert_eq!(d8.order(), 8);
        assert!(!d8.is_abelian());
        assert_eq!(d16.quotient_by_tail(4).unwrap(), d16);
        let heis = parse_presentation("p 3\ngens 3\ncomm 2 1 : g3^1\n").unwrap();
        assert!(heis.quotient_by_tail(2).unwrap().is_abelian());
        assert!(heis.quotient_by_tail(4).is_err());
    }

    const HEIS3: &str = "p 3\ngens 3\ncomm 2 1 : g3^1\n";

    #[test]
    fn heisenberg_arithmetic() {
        let g = parse_presentation(HEIS3).unwrap();
        assert_eq!(g.ngens(), 3);
        let a = g.generator(0);
        let b = g.generator(1);
        assert_eq!(g.multiply(&b, &a), Element(vec![1, 1, 1]));
        let ab = Element(vec![1, 1, 0]);
        assert_eq!(g.multiply(&ab, &ab), Element(vec![2, 2, 1]));
        assert_eq!(g.commutator(&b, &a), Element(vec![0, 0, 1]));
        assert_eq!(g.commutator(&a, &a), g.identity());
        assert_eq!(g.element_order(&ab), 3);
        assert_eq!(g.multiply(&g.identity(), &ab), ab);
    }

    #[test]
    fn rejects_backwards_commutator() {
        let err = parse_presentation("p 3\ngens 3\ncomm 1 2 : g3^1\n").unwrap_err();
        assert!(matches!(err, Error::RelationSupport { line: 3, .. }));
        assert!(err.to_string().contains("earlier-or-equal"));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            parse_presentation("p 4\ngens 1\n").unwrap_err(),
            Error::NotPrime(4)
        );
        assert!(matches!(
            parse_presentation("p 3\ngens 2\npow 1 : g2^3\n").unwrap_err(),
            Error::ExponentRange {
                line: 3,
                exponent: 3,
                p: 3
            }
        ));
        assert!(matches!(
            parse_presentation("p 3\ngens 2\npow 1 g2^1\n").unwrap_err(),
            Error::Syntax { line: 3, .. }
        ));
        assert!(matches!(
            parse_presentation("gens 2\np 3\n").unwrap_err(),
            Error::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));
        assert!(matches!(
            parse_presentation("p 2\ngens 2\npow 2 : g1^1\n").unwrap_err(),
            Error::RelationSupport { .. }
        ));
    }

    #[test]
    fn detects_inconsistency() {
        // g1^2 = g2 with g2 not commuting with g1 through g3 is fine in
        // D8-like shapes, but g1^2 = g2 together with [g2, g1] = g3 is not.
        let bad = "p 2\ngens 3\npow 1 : g2^1\ncomm 2 1 : g3^1\n";
        let err = parse_presentation(bad).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)), "{err}");
    }

    #[test]
    fn round_trip_text() {
        let text = "p 2\ngens 3\npow 2 : g3^1\ncomm 2 1 : g3^1\n";
        let g = parse_presentation(text).unwrap();
        assert_eq!(g.to_text(), text);
    }

    #[test]
    fn keys_round_trip() {
        let g = parse_presentation(HEIS3).unwrap();
        for k in 0..27 {
            assert_eq!(g.key(&g.element_of_key(k)), k);
        }
    }
}
