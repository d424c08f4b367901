//! The 108 structural conditions on `G′` and the lower central series that
//! are claimed to characterize `t^L(KG) = 10p − 8`, a matcher for them, and
//! a checker that holds the claim against the computed index.
//!
//! Each condition is stored twice when its text needs a correction: the
//! reading as written and a corrected reading. Nothing is repaired silently.
//!
//! Small-group identifiers in the conditions are resolved by fingerprint
//! against the shipped presentations of that order. If the fingerprint of
//! `G′` agrees with listed and unlisted groups at once, the item is
//! reported as undetermined.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra_oracle::{t_upper_direct, ORACLE_CAP};
use crate::catalog::{build_heisenberg_times_elementary, build_paper_presentation, CatalogEntry};
use crate::dvector_analysis::DVector;
use crate::error::{Error, Result};
use crate::group_engine::PcPresentation;
use crate::lie_dimension::{d_sequence, jennings_index};
use crate::structure::{
    center, derived_subgroup, fingerprint, intersection, lower_central_series, power_subgroup,
    subgroup_product, IsoType, Subgroup,
};

const ITEM_TEXT: &str = include_str!("theorem_items.txt");

/// Number of conditions.
pub const ITEM_COUNT: u32 = 108;

/// `10p − 8`.
pub fn target_index(p: u32) -> u64 {
    10 * p as u64 - 8
}

// ---------------------------------------------------------------------------
// Condition language

/// An exponent `q` in `G′^q`: either the field characteristic or a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exp {
    P,
    Lit(u64),
}

impl Exp {
    /// `G′^q = G′^{r^k}` where `r^k` is the `r`-part of `q`; the rest acts
    /// bijectively on an `r`-group.
    fn level(self, p: u32, r: u32) -> usize {
        let mut q = match self {
            Exp::P => p as u64,
            Exp::Lit(q) => q,
        };
        let mut k = 0;
        while q > 1 && q % r as u64 == 0 {
            q /= r as u64;
            k += 1;
        }
        k
    }
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exp::P => f.write_str("p"),
            Exp::Lit(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Lit(u64),
    /// `C_{p^e}`.
    PPow(u32),
}

/// An abelian group as a list of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shape(pub Vec<Factor>);

impl Shape {
    /// Invariant factors at `p`, largest first.
    pub fn at(&self, p: u32) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .0
            .iter()
            .map(|f| match *f {
                Factor::Lit(n) => n,
                Factor::PPow(e) => (p as u64).pow(e),
            })
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn order(&self, p: u32) -> u128 {
        self.at(p).iter().map(|&x| x as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    fn matches(&self, iso: &IsoType, p: u32) -> bool {
        iso.abelian_invariants() == Some(&self.at(p)[..])
    }

    /// Primes named by literal factors.
    fn literal_primes(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .0
            .iter()
            .filter_map(|f| match *f {
                Factor::Lit(n) => Some(smallest_prime_factor(n)),
                Factor::PPow(_) => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|d| n % d == 0).unwrap_or(n)
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        // Runs of equal factors print as powers: `C_{p^2}x(C_p)^4`.
        let mut parts: Vec<String> = Vec::new();
        let mut rest = &self.0[..];
        while let Some(x) = rest.first() {
            let run = rest.iter().take_while(|y| *y == x).count();
            let one = match *x {
                Factor::Lit(n) => format!("C{n}"),
                Factor::PPow(1) => "C_p".to_string(),
                Factor::PPow(e) => format!("C_{{p^{e}}}"),
            };
            parts.push(if run == 1 {
                one
            } else {
                format!("({one})^{run}")
            });
            rest = &rest[run..];
        }
        f.write_str(&parts.join("x"))
    }
}

/// Non-abelian groups named by their structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedGroup {
    /// Heisenberg group of order `p^3` times `(C_p)^k`.
    HeisenbergTimesElementary(usize),
    /// `(He_p ∘ He_p) × (C_p)^2`, order `p^7`.
    ExtraspecialTimesElementary2,
}

impl NamedGroup {
    const ALL: [NamedGroup; 5] = [
        NamedGroup::HeisenbergTimesElementary(1),
        NamedGroup::HeisenbergTimesElementary(2),
        NamedGroup::HeisenbergTimesElementary(3),
        NamedGroup::HeisenbergTimesElementary(4),
        NamedGroup::ExtraspecialTimesElementary2,
    ];

    pub fn log_order(self) -> u32 {
        match self {
            NamedGroup::HeisenbergTimesElementary(k) => 3 + k as u32,
            NamedGroup::ExtraspecialTimesElementary2 => 7,
        }
    }

    pub fn build(self, p: u32) -> Result<PcPresentation> {
        Ok(match self {
            NamedGroup::HeisenbergTimesElementary(k) => {
                build_heisenberg_times_elementary(p, k)?.presentation
            }
            NamedGroup::ExtraspecialTimesElementary2 => {
                build_paper_presentation(67, p)?.presentation
            }
        })
    }
}

impl fmt::Display for NamedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGroup::HeisenbergTimesElementary(k) => write!(f, "He_p x (C_p)^{k}"),
            NamedGroup::ExtraspecialTimesElementary2 => f.write_str("(He_p o He_p) x (C_p)^2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DerivedShape {
    Abelian {
        shape: Shape,
    },
    /// One of `SmallGroup(order, id)` for the listed ids.
    SmallGroups {
        order: u64,
        ids: Vec<u64>,
    },
    Named {
        group: NamedGroup,
    },
}

impl fmt::Display for DerivedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivedShape::Abelian { shape } => write!(f, "G′ ≅ {shape}"),
            DerivedShape::SmallGroups { order, ids } => {
                let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
                write!(f, "G′ ≅ S({order}, {{{}}})", ids.join(","))
            }
            DerivedShape::Named { group } => write!(f, "G′ ≅ {group}"),
        }
    }
}

/// One conjunct about `G′`, its powers and the lower central series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Atom {
    GammaIso {
        i: usize,
        shape: Shape,
    },
    GammaInPower {
        i: usize,
        q: Exp,
    },
    PowerInGamma {
        q: Exp,
        i: usize,
    },
    PowerEqGamma {
        q: Exp,
        i: usize,
    },
    /// `|G′^q ∩ γ_i| = n`.
    MeetOrder {
        q: Exp,
        i: usize,
        n: u128,
    },
    PowerIso {
        q: Exp,
        shape: Shape,
    },
    /// `γ_i ≅ G′^q` as abstract groups.
    GammaIsoPower {
        i: usize,
        q: Exp,
    },
    /// `γ_4 ⊆ G′^a γ_3^b`.
    Gamma4InMixed {
        a: Exp,
        b: Exp,
    },
    MixedIso {
        a: Exp,
        b: Exp,
        shape: Shape,
    },
    PowerInCenter {
        q: Exp,
    },
    DerivedDerivedInCenter,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::GammaIso { i, shape } => write!(f, "γ{i} ≅ {shape}"),
            Atom::GammaInPower { i, q } => write!(f, "γ{i} ⊆ G′^{q}"),
            Atom::PowerInGamma { q, i } => write!(f, "G′^{q} ⊆ γ{i}"),
            Atom::PowerEqGamma { q, i } => write!(f, "G′^{q} = γ{i}"),
            Atom::MeetOrder { q, i, n } => write!(f, "|G′^{q} ∩ γ{i}| = {n}"),
            Atom::PowerIso { q, shape } => write!(f, "G′^{q} ≅ {shape}"),
            Atom::GammaIsoPower { i, q } => write!(f, "γ{i} ≅ G′^{q}"),
            Atom::Gamma4InMixed { a, b } => write!(f, "γ4 ⊆ G′^{a}γ3^{b}"),
            Atom::MixedIso { a, b, shape } => write!(f, "G′^{a}γ3^{b} ≅ {shape}"),
            Atom::PowerInCenter { q } => write!(f, "G′^{q} ⊆ Z(G′)"),
            Atom::DerivedDerivedInCenter => f.write_str("G″ ⊆ Z(G′)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "min", rename_all = "snake_case")]
pub enum PrimeRule {
    Any,
    AtLeast(u32),
}

impl PrimeRule {
    pub fn admits(self, p: u32) -> bool {
        match self {
            PrimeRule::Any => true,
            PrimeRule::AtLeast(m) => p >= m,
        }
    }
}

/// `derived ∧ common ∧ (alt_1 ∨ alt_2 ∨ …)`; no alternatives means just
/// `derived ∧ common`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub rule: PrimeRule,
    pub derived: DerivedShape,
    pub common: Vec<Atom>,
    pub alternatives: Vec<Vec<Atom>>,
}

impl Condition {
    /// Each branch as a flat conjunct list.
    pub fn branches(&self) -> Vec<Vec<Atom>> {
        if self.alternatives.is_empty() {
            return vec![self.common.clone()];
        }
        self.alternatives
            .iter()
            .map(|alt| self.common.iter().chain(alt).cloned().collect())
            .collect()
    }

    /// The prime the condition talks about when it is fixed by the text,
    /// otherwise the smallest prime the rule admits.
    pub fn natural_prime(&self) -> u32 {
        let fixed = match &self.derived {
            DerivedShape::Abelian { shape } => shape.literal_primes().first().copied(),
            DerivedShape::SmallGroups { order, .. } => Some(smallest_prime_factor(*order)),
            DerivedShape::Named { .. } => None,
        };
        match (fixed, self.rule) {
            (Some(q), _) => q as u32,
            (None, PrimeRule::AtLeast(m)) => m,
            (None, PrimeRule::Any) => 2,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Atom]| {
            v.iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "{}", self.derived)?;
        if !self.common.is_empty() {
            write!(f, "; {}", join(&self.common))?;
        }
        if !self.alternatives.is_empty() {
            let alts: Vec<String> = self
                .alternatives
                .iter()
                .map(|a| format!("[{}]", join(a)))
                .collect();
            write!(f, "; either {}", alts.join(" or "))?;
        }
        if let PrimeRule::AtLeast(m) = self.rule {
            write!(f, "; p ≥ {m}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionSet {
    /// Every item as written.
    Literal,
    /// Flagged items replaced by their corrected reading.
    Corrected,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionRecord {
    pub item: u32,
    pub citation: &'static str,
    pub literal: Condition,
    pub corrected: Option<Condition>,
    pub note: Option<&'static str>,
}

impl ConditionRecord {
    pub fn condition(&self, set: ConditionSet) -> &Condition {
        match (set, &self.corrected) {
            (ConditionSet::Corrected, Some(c)) => c,
            _ => &self.literal,
        }
    }
}

// ---------------------------------------------------------------------------
// The table

fn lit(v: &[u64]) -> Shape {
    Shape(v.iter().map(|&n| Factor::Lit(n)).collect())
}

fn pp(v: &[u32]) -> Shape {
    Shape(v.iter().map(|&e| Factor::PPow(e)).collect())
}

fn el(k: usize) -> Shape {
    pp(&vec![1; k])
}

fn rep(n: u64, k: usize) -> Vec<u64> {
    vec![n; k]
}

fn with(mut head: Vec<u64>, tail: &[u64]) -> Vec<u64> {
    head.extend_from_slice(tail);
    head
}

const P: Exp = Exp::P;
const fn l(q: u64) -> Exp {
    Exp::Lit(q)
}

fn giso(i: usize, shape: Shape) -> Atom {
    Atom::GammaIso { i, shape }
}
fn gl(i: usize, v: &[u64]) -> Atom {
    giso(i, lit(v))
}
fn gtriv(i: usize) -> Atom {
    giso(i, lit(&[]))
}
fn gin(i: usize, q: Exp) -> Atom {
    Atom::GammaInPower { i, q }
}
fn pin(q: Exp, i: usize) -> Atom {
    Atom::PowerInGamma { q, i }
}
fn peq(q: Exp, i: usize) -> Atom {
    Atom::PowerEqGamma { q, i }
}
fn meet(q: Exp, i: usize, n: u128) -> Atom {
    Atom::MeetOrder { q, i, n }
}
fn piso(q: Exp, v: &[u64]) -> Atom {
    Atom::PowerIso { q, shape: lit(v) }
}

fn ab(v: &[u64]) -> DerivedShape {
    DerivedShape::Abelian { shape: lit(v) }
}
fn abp(shape: Shape) -> DerivedShape {
    DerivedShape::Abelian { shape }
}
fn ids(order: u64, parts: &[(u64, u64)]) -> DerivedShape {
    let ids = parts.iter().flat_map(|&(a, b)| a..=b).collect();
    DerivedShape::SmallGroups { order, ids }
}
fn one(id: u64) -> (u64, u64) {
    (id, id)
}
fn named(group: NamedGroup) -> DerivedShape {
    DerivedShape::Named { group }
}

fn cond(derived: DerivedShape, common: Vec<Atom>, alternatives: Vec<Vec<Atom>>) -> Condition {
    Condition {
        rule: PrimeRule::Any,
        derived,
        common,
        alternatives,
    }
}

fn at_least(m: u32, mut c: Condition) -> Condition {
    c.rule = PrimeRule::AtLeast(m);
    c
}

/// `γ4 ⊆ G′^4γ3^2 ≅ C_2, γ5 = 1`, shared by items 22 to 25.
fn mixed_tail() -> Vec<Atom> {
    vec![
        Atom::Gamma4InMixed { a: l(4), b: l(2) },
        Atom::MixedIso {
            a: l(4),
            b: l(2),
            shape: lit(&[2]),
        },
        gtriv(5),
    ]
}

fn tail34(g3: &[u64], g4: u64) -> Vec<Atom> {
    vec![gl(3, g3), gl(4, &[g4]), gtriv(5)]
}

fn records() -> Vec<ConditionRecord> {
    use NamedGroup::*;
    let mut t: Vec<(Condition, Option<Condition>, Option<&'static str>)> = Vec::new();
    let mut push = |c: Condition| t.push((c, None, None));

    // 1-10
    push(cond(ab(&[49, 7, 7]), vec![gin(3, l(7))], vec![]));
    push(cond(
        ab(&[49, 7]),
        vec![gl(3, &[7]), meet(l(7), 3, 1)],
        vec![],
    ));
    push(cond(
        ab(&[49, 7]),
        vec![gin(4, l(7)), pin(l(7), 3), gl(3, &[7, 7]), gtriv(5)],
        vec![],
    ));
    push(cond(
        ab(&[25, 5, 5, 5, 5]),
        vec![pin(l(5), 3), gtriv(4)],
        vec![],
    ));
    push(cond(
        ab(&rep(5, 6)),
        vec![meet(l(5), 3, 1), gl(3, &[5]), gtriv(4)],
        vec![],
    ));
    // 6 is pushed below with its correction.
    let six = (
        cond(ab(&[25, 25, 5]), vec![gin(3, l(2))], vec![]),
        Some(cond(ab(&[25, 25, 5]), vec![gin(3, l(5))], vec![])),
        Some("exponent 2 is a unit mod 5, so G′^2 = G′ and the clause is vacuous; read as G′^5"),
    );
    t.push(six);
    let mut push = |c: Condition| t.push((c, None, None));
    push(cond(
        ab(&[25, 5, 5, 5]),
        vec![],
        vec![
            vec![meet(l(5), 3, 1), gl(3, &[5])],
            vec![pin(l(5), 3), gl(3, &[5, 5])],
        ],
    ));
    push(cond(
        ab(&rep(5, 5)),
        vec![meet(l(5), 3, 1), gl(3, &[5, 5]), gtriv(4)],
        vec![],
    ));
    push(cond(
        ids(3125, &[one(2), (40, 44), (73, 74)]),
        vec![
            Atom::PowerInCenter { q: l(5) },
            Atom::DerivedDerivedInCenter,
            pin(l(5), 3),
            gl(3, &[5, 5]),
            gl(4, &[5]),
            gtriv(5),
        ],
        vec![],
    ));
    push(cond(
        ab(&[25, 5, 5]),
        vec![],
        vec![
            vec![meet(l(5), 3, 1), gl(3, &[5, 5])],
            vec![peq(l(5), 3), gl(3, &[5])],
            vec![pin(l(5), 3), gl(3, &[5, 5, 5])],
        ],
    ));

    // 11-20
    push(cond(
        ab(&[8, 2, 2, 2]),
        vec![gin(3, l(2)), gl(3, &[4]), gtriv(4)],
        vec![],
    ));
    push(cond(
        ab(&[4, 4, 2, 2]),
        vec![gin(3, l(2)), gtriv(4)],
        vec![],
    ));
    push(cond(
        ab(&[4, 2, 2, 2, 2]),
        vec![pin(l(2), 3), gl(3, &[4]), gtriv(4)],
        vec![],
    ));
    push(cond(
        ids(64, &[(199, 201), (215, 245)]),
        vec![gin(3, l(2)), gl(4, &[2])],
        vec![],
    ));
    push(cond(
        ids(64, &[(264, 265)]),
        vec![],
        vec![
            vec![pin(l(2), 3), gl(3, &[4])],
            vec![meet(l(2), 3, 1), gl(3, &[2])],
        ],
    ));
    push(cond(
        ids(64, &[(247, 248)]),
        vec![peq(l(2), 3), gl(3, &[4]), gl(4, &[2]), gtriv(5)],
        vec![],
    ));
    push(cond(
        ids(64, &[one(263)]),
        vec![meet(l(2), 3, 2), gl(3, &[4]), gl(4, &[2]), gtriv(5)],
        vec![],
    ));
    push(cond(
        ab(&[8, 4]),
        vec![],
        vec![
            vec![pin(l(2), 3), gl(3, &[4, 2])],
            vec![gin(3, l(2)), gl(3, &[4])],
        ],
    ));
    push(cond(
        ab(&[8, 2, 2]),
        vec![pin(l(2), 3), gl(3, &[4, 2])],
        vec![],
    ));
    push(cond(
        ab(&[4, 4, 2]),
        vec![],
        vec![
            vec![meet(l(2), 3, 2), gl(3, &[4])],
            vec![meet(l(2), 3, 4), gl(3, &[4, 2])],
        ],
    ));

    // 21-30
    push(cond(
        ab(&[4, 2, 2, 2]),
        vec![meet(l(2), 3, 2), gl(3, &[4, 2])],
        vec![],
    ));
    let mut c22 = vec![gin(3, l(2)), piso(l(2), &[4, 2])];
    c22.extend(mixed_tail());
    push(cond(ids(32, &[one(4), one(5), one(12)]), c22, vec![]));
    push(cond(
        ids(32, &[(22, 26)]),
        mixed_tail(),
        vec![
            vec![meet(l(2), 3, 2), gl(3, &[4])],
            vec![pin(l(2), 3), gl(3, &[4, 2])],
        ],
    ));
    push(cond(
        ids(32, &[(37, 38)]),
        mixed_tail(),
        vec![
            vec![meet(l(2), 3, 2), gl(3, &[2, 2])],
            vec![pin(l(2), 3), gl(3, &[4, 2])],
        ],
    ));
    push(cond(
        ids(32, &[(46, 48)]),
        mixed_tail(),
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[4])],
            vec![pin(l(2), 3), gl(3, &[4, 2])],
        ],
    ));
    push(at_least(
        5,
        cond(
            abp(el(4)),
            vec![
                meet(P, 3, 1),
                giso(3, el(3)),
                giso(4, el(2)),
                giso(5, el(1)),
            ],
            vec![],
        ),
    ));
    let i27 = |q: u64| {
        cond(
            ab(&[9, 3, 3]),
            vec![],
            vec![
                vec![meet(l(q), 3, 1), gl(3, &[3, 3])],
                vec![pin(l(3), 3), gl(3, &[3, 3, 3])],
            ],
        )
    };
    t.push((
        i27(2),
        Some(i27(3)),
        Some("G′^2 = G′ in a 3-group, so |G′^2 ∩ γ3| = |γ3| ≠ 1; read as G′^3"),
    ));
    let mut push = |c: Condition| t.push((c, None, None));
    push(cond(
        ab(&rep(3, 4)),
        vec![meet(l(3), 3, 1), gl(3, &[3, 3, 3])],
        vec![],
    ));
    push(cond(
        ab(&[8, 2]),
        vec![],
        vec![
            vec![gl(3, &[2]), meet(l(2), 3, 1)],
            vec![pin(l(2), 3), gl(3, &[4, 2])],
        ],
    ));
    push(cond(
        ab(&[4, 2, 2]),
        vec![pin(l(2), 3), gl(3, &[4, 2])],
        vec![],
    ));

    // 31-40
    push(at_least(
        5,
        cond(
            named(HeisenbergTimesElementary(1)),
            vec![giso(3, el(3)), giso(4, el(2)), giso(5, el(1)), gtriv(6)],
            vec![],
        ),
    ));
    push(cond(
        ab(&[9, 9]),
        vec![pin(l(3), 3), gl(3, &[3, 3, 3])],
        vec![],
    ));
    push(cond(
        ab(&[9, 3, 3]),
        vec![],
        vec![
            vec![meet(l(3), 3, 1), gl(3, &[3, 3])],
            vec![pin(l(3), 3), gl(3, &[3, 3, 3])],
        ],
    ));
    push(cond(
        ab(&rep(3, 4)),
        vec![meet(l(3), 3, 1), gl(3, &[3, 3, 3])],
        vec![],
    ));
    push(at_least(
        5,
        cond(abp(el(5)), vec![giso(3, el(3)), meet(P, 3, 1)], vec![]),
    ));
    push(cond(
        ab(&[9, 9, 3]),
        vec![pin(l(3), 3), gl(3, &[3, 3, 3])],
        vec![],
    ));
    push(cond(
        ab(&[9, 3, 3, 3]),
        vec![],
        vec![
            vec![meet(l(3), 3, 1), gl(3, &[3, 3])],
            vec![pin(l(3), 3), gl(3, &[3, 3, 3])],
        ],
    ));
    push(cond(
        ab(&rep(3, 5)),
        vec![meet(l(3), 3, 1), gl(3, &[3, 3, 3])],
        vec![],
    ));
    push(cond(
        ab(&[4, 4, 2]),
        vec![],
        vec![
            vec![pin(l(2), 3), gl(3, &[2, 2, 2])],
            vec![meet(l(2), 3, 2), gl(3, &[2, 2])],
            vec![meet(l(2), 3, 1), gl(3, &[2])],
        ],
    ));
    push(cond(
        ab(&[4, 2, 2, 2]),
        vec![],
        vec![
            vec![pin(l(2), 3), gl(3, &[2, 2, 2])],
            vec![meet(l(2), 3, 1), gl(3, &[2, 2])],
        ],
    ));

    // 41-50
    push(cond(
        ab(&rep(2, 5)),
        vec![meet(l(2), 3, 1), gl(3, &[2, 2, 2])],
        vec![],
    ));
    push(cond(
        ids(32, &[one(2)]),
        vec![gin(3, l(2)), gl(4, &[2]), gtriv(5)],
        vec![],
    ));
    push(cond(
        ids(32, &[(22, 26)]),
        vec![gl(4, &[2]), gtriv(5), meet(l(2), 3, 2), gl(3, &[2, 2])],
        vec![],
    ));
    let i44 = |g3: &[u64]| {
        cond(
            ids(32, &[(46, 48)]),
            vec![gl(4, &[2]), gtriv(5)],
            vec![
                vec![meet(l(2), 3, 1), gl(3, &[2, 2])],
                vec![pin(l(2), 3), gl(3, g3)],
            ],
        )
    };
    t.push((
        i44(&[3, 3, 3]),
        Some(i44(&[2, 2, 2])),
        Some("(C_3)^3 cannot sit inside a 2-group; read as (C_2)^3"),
    ));
    let mut push = |c: Condition| t.push((c, None, None));
    push(cond(
        ids(243, &[one(2), (33, 34), one(36)]),
        vec![gl(4, &[3]), gtriv(5)],
        vec![
            vec![pin(l(3), 3), gl(3, &[3, 3, 3])],
            vec![meet(l(3), 3, 3), gl(3, &[3, 3])],
        ],
    ));
    let i46 = |d: DerivedShape| {
        at_least(
            5,
            cond(d, vec![giso(3, el(3)), giso(4, el(1)), gtriv(5)], vec![]),
        )
    };
    t.push((
        i46(named(HeisenbergTimesElementary(2))),
        Some(i46(abp(el(5)))),
        Some(
            "the relation [b,a] = e makes <a,b,e> non-abelian although the text calls it \
             abelian; as written the presented group is used, the corrected reading takes \
             the abelian description (C_p)^5",
        ),
    ));
    let mut push = |c: Condition| t.push((c, None, None));
    push(cond(
        ab(&[9, 9, 3, 3]),
        vec![gin(3, l(3)), gtriv(4)],
        vec![],
    ));
    push(cond(
        ab(&[9, 3, 3, 3, 3]),
        vec![],
        vec![
            vec![gl(3, &[3]), gtriv(4), meet(l(3), 3, 1)],
            vec![pin(l(3), 3), gl(3, &[3, 3]), gtriv(4)],
        ],
    ));
    let mut c49 = vec![pin(l(3), 3), gl(3, &[3, 3]), meet(l(3), 4, 1)];
    c49.extend([gl(4, &[3]), gtriv(5)]);
    push(cond(ids(729, &[one(422), one(502)]), c49, vec![]));
    let mut c50 = vec![pin(l(3), 3)];
    c50.extend(tail34(&[3, 3], 3));
    push(cond(ids(729, &[(423, 424)]), c50, vec![]));

    // 51-60
    let mut c51 = vec![peq(l(3), 3)];
    c51.extend(tail34(&[3, 3], 3));
    push(cond(
        ids(729, &[one(103), one(105), (417, 418), (420, 421)]),
        c51,
        vec![],
    ));
    let mut c52 = vec![pin(l(3), 3)];
    c52.extend(tail34(&[3, 3], 3));
    push(cond(
        ids(729, &[one(416), one(419), (499, 500)]),
        c52,
        vec![],
    ));
    push(cond(
        ab(&with(vec![9], &rep(3, 6))),
        vec![gin(3, l(3)), piso(l(3), &[3]), gtriv(4)],
        vec![],
    ));
    t.push((
        cond(
            ab(&[4, 4, 2, 2, 2]),
            vec![Atom::GammaIsoPower { i: 3, q: l(2) }],
            vec![],
        ),
        Some(cond(ab(&[4, 4, 2, 2, 2]), vec![peq(l(2), 3)], vec![])),
        Some("γ3 ≅ G′^2 as written; the equality γ3 = G′^2 is the corrected reading"),
    ));
    let mut push = |c: Condition| t.push((c, None, None));
    push(cond(
        ab(&with(vec![4], &rep(2, 5))),
        vec![],
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[2])],
            vec![pin(l(2), 3), gl(3, &[2, 2])],
        ],
    ));
    push(cond(
        ab(&with(vec![9], &rep(3, 5))),
        vec![],
        vec![
            vec![gl(3, &[3]), meet(l(3), 3, 1)],
            vec![pin(l(3), 3), gl(3, &[3, 3])],
        ],
    ));
    push(at_least(
        5,
        cond(abp(el(7)), vec![meet(P, 3, 1), giso(3, el(2))], vec![]),
    ));
    let mut c58 = vec![pin(l(2), 3)];
    c58.extend(tail34(&[2, 2], 2));
    push(cond(ids(128, &[(2157, 2162), one(2304)]), c58, vec![]));
    let mut c59 = vec![meet(l(2), 3, 2)];
    c59.extend(tail34(&[2, 2], 2));
    push(cond(ids(128, &[(2323, 2325)]), c59, vec![]));
    let mut c60 = vec![peq(l(2), 3)];
    c60.extend(tail34(&[2, 2], 2));
    push(cond(ids(128, &[(2151, 2156), (2302, 2303)]), c60, vec![]));

    // 61-70
    let mut c61 = vec![pin(l(2), 3)];
    c61.extend(tail34(&[2, 2], 2));
    push(cond(ids(128, &[(2320, 2322)]), c61, vec![]));
    let mut c62 = vec![peq(l(3), 3)];
    c62.extend(tail34(&[3, 3], 3));
    push(cond(
        ids(2187, &[one(5874), one(5876), (9102, 9105)]),
        c62,
        vec![],
    ));
    let mut c63 = vec![pin(l(3), 3)];
    c63.extend(tail34(&[3, 3], 3));
    push(cond(ids(2187, &[(9100, 9101), (9306, 9307)]), c63, vec![]));
    let mut c64 = vec![peq(l(3), 3)];
    c64.extend(tail34(&[3, 3], 3));
    push(cond(
        ids(2187, &[one(5867), one(5870), one(5872), (9096, 9099)]),
        c64,
        vec![],
    ));
    let mut c65 = vec![pin(l(3), 3)];
    c65.extend(tail34(&[3, 3], 3));
    push(cond(ids(2187, &[(9094, 9095), (9303, 9304)]), c65, vec![]));
    push(at_least(
        3,
        cond(
            named(HeisenbergTimesElementary(4)),
            vec![giso(3, el(2)), giso(4, el(1)), gtriv(5)],
            vec![],
        ),
    ));
    push(at_least(
        3,
        cond(
            named(ExtraspecialTimesElementary2),
            vec![giso(3, el(2)), giso(4, el(1)), gtriv(5)],
            vec![],
        ),
    ));
    push(cond(ab(&[4, 4, 4]), vec![gin(3, l(2)), gtriv(4)], vec![]));
    push(cond(
        ab(&[4, 4, 2, 2]),
        vec![],
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[2])],
            vec![gl(3, &[2, 2])],
            vec![pin(l(2), 3), gl(3, &[2, 2, 2])],
        ],
    ));
    push(cond(
        ab(&rep(2, 6)),
        vec![meet(l(2), 3, 1), gl(3, &[2, 2, 2]), gtriv(4)],
        vec![],
    ));

    // 71-80
    let i71 = |q: u64| {
        cond(
            ab(&[9, 3, 3, 3, 3]),
            vec![],
            vec![
                vec![gl(3, &[3, 3]), meet(l(q), 3, 1)],
                vec![pin(l(3), 3), gl(3, &[3, 3, 3])],
            ],
        )
    };
    t.push((
        i71(2),
        Some(i71(3)),
        Some("G′^2 = G′ in a 3-group, so |G′^2 ∩ γ3| = |γ3| ≠ 1; read as G′^3"),
    ));
    let mut push = |c: Condition| t.push((c, None, None));
    push(at_least(
        5,
        cond(
            abp(el(6)),
            vec![meet(P, 3, 1), giso(3, el(3)), giso(4, el(1)), gtriv(5)],
            vec![],
        ),
    ));
    let mut c73 = vec![meet(l(2), 3, 2)];
    c73.extend(tail34(&[2, 2], 2));
    push(cond(ids(64, &[(199, 201)]), c73, vec![]));
    let mut c74 = vec![meet(l(2), 3, 1)];
    c74.extend(tail34(&[2, 2], 2));
    push(cond(ids(64, &[(264, 265)]), c74, vec![]));
    let mut c75 = vec![gin(3, l(2))];
    c75.extend(tail34(&[2, 2], 2));
    push(cond(ids(64, &[(56, 59)]), c75, vec![]));
    let mut c76 = vec![meet(l(2), 3, 2)];
    c76.extend(tail34(&[2, 2], 2));
    push(cond(ids(64, &[(193, 198)]), c76, vec![]));
    let mut c77 = vec![gin(3, l(2))];
    c77.extend(tail34(&[2, 2, 2], 2));
    push(cond(ids(64, &[(56, 59)]), c77, vec![]));
    push(cond(
        ids(64, &[(193, 198)]),
        vec![pin(l(2), 3), gl(3, &[2, 2, 2])],
        vec![],
    ));
    let mut c79 = vec![pin(l(3), 3)];
    c79.extend(tail34(&[3, 3, 3], 3));
    push(cond(
        ids(729, &[(103, 106), (416, 420), (499, 500)]),
        c79,
        vec![],
    ));
    let mut c80 = vec![meet(l(3), 3, 3)];
    c80.extend(tail34(&[3, 3], 3));
    push(cond(
        ids(729, &[one(103), one(105), (417, 418), (420, 421)]),
        c80,
        vec![],
    ));

    // 81-90
    let i81 = |q: u64| {
        let mut c = vec![gin(3, l(q))];
        c.extend(tail34(&[3, 3], 3));
        cond(ids(729, &[one(104), one(106)]), c, vec![])
    };
    t.push((
        i81(2),
        Some(i81(3)),
        Some("G′^2 = G′ in a 3-group, so γ3 ⊆ G′^2 is vacuous; read as G′^3"),
    ));
    let mut push = |c: Condition| t.push((c, None, None));
    let mut c82 = vec![meet(l(3), 3, 1)];
    c82.extend(tail34(&[3, 3], 3));
    push(cond(
        ids(729, &[one(416), one(419), (499, 500)]),
        c82,
        vec![],
    ));
    push(at_least(
        5,
        cond(
            named(HeisenbergTimesElementary(3)),
            vec![giso(3, el(3)), meet(P, 3, 1), giso(4, el(1)), gtriv(5)],
            vec![],
        ),
    ));
    push(cond(
        ab(&[4, 4, 2]),
        vec![],
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[2, 2])],
            vec![meet(l(2), 3, 2), gl(3, &[2, 2, 2])],
            vec![pin(l(2), 3), gl(3, &rep(2, 4))],
        ],
    ));
    push(cond(
        ab(&[4, 2, 2, 2]),
        vec![],
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[2, 2, 2])],
            vec![pin(l(2), 3), gl(3, &rep(2, 4))],
        ],
    ));
    push(cond(
        ab(&rep(2, 4)),
        vec![meet(l(2), 3, 1), gl(3, &rep(2, 4))],
        vec![],
    ));
    push(cond(
        ab(&[9, 3, 3, 3]),
        vec![],
        vec![
            vec![gl(3, &[3, 3, 3]), meet(l(3), 3, 1)],
            vec![gl(3, &rep(3, 4)), pin(l(3), 3)],
        ],
    ));
    push(at_least(
        5,
        cond(abp(el(5)), vec![giso(3, el(4)), meet(P, 3, 1)], vec![]),
    ));
    let mut c89 = vec![meet(l(2), 3, 4)];
    c89.extend(tail34(&[2, 2, 2], 2));
    push(cond(ids(32, &[one(2)]), c89, vec![]));
    push(cond(
        ids(243, &[one(32)]),
        vec![meet(l(3), 3, 1), gl(3, &[3, 3, 3]), gl(4, &[3])],
        vec![],
    ));

    // 91-100
    t.push((
        cond(abp(el(10)), vec![gtriv(3), meet(l(3), 4, 1)], vec![]),
        Some(cond(abp(el(10)), vec![gtriv(3), meet(P, 4, 1)], vec![])),
        Some("with γ3 = 1 the clause on γ4 holds for every exponent; read with G′^p"),
    ));
    let mut push = |c: Condition| t.push((c, None, None));
    push(at_least(
        3,
        cond(
            abp(el(9)),
            vec![giso(3, el(1)), meet(P, 3, 1), gtriv(4)],
            vec![],
        ),
    ));
    push(cond(
        ab(&with(vec![4], &rep(2, 7))),
        vec![gin(3, l(2)), piso(l(2), &[2]), gtriv(4)],
        vec![],
    ));
    push(cond(
        ab(&rep(2, 9)),
        vec![gl(3, &[2]), meet(l(2), 3, 1), gtriv(4)],
        vec![],
    ));
    push(at_least(
        3,
        cond(
            abp(el(8)),
            vec![giso(3, el(2)), meet(P, 3, 1), gtriv(4)],
            vec![],
        ),
    ));
    let i96 = cond(
        ab(&rep(2, 8)),
        vec![meet(l(2), 3, 1), gl(3, &[2, 2]), gtriv(4)],
        vec![],
    );
    t.push((
        at_least(5, i96.clone()),
        Some(i96),
        Some("a 2-group condition restricted to p ≥ 5; the restriction is dropped"),
    ));
    let i97 = cond(
        ab(&with(vec![4], &rep(2, 6))),
        vec![],
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[2])],
            vec![pin(l(2), 3), gl(3, &[2, 2])],
        ],
    );
    t.push((
        at_least(5, i97.clone()),
        Some(i97),
        Some("a 2-group condition restricted to p ≥ 5; the restriction is dropped"),
    ));
    let mut push = |c: Condition| t.push((c, None, None));
    push(cond(
        ab(&[4, 4, 2, 2, 2, 2]),
        vec![gin(3, l(2)), gtriv(4)],
        vec![],
    ));
    push(at_least(
        3,
        cond(abp(el(7)), vec![giso(3, el(3)), meet(P, 3, 1)], vec![]),
    ));
    push(cond(
        ab(&[4, 4, 4, 2]),
        vec![gin(3, l(2)), gtriv(4)],
        vec![],
    ));

    // 101-108
    push(cond(
        ab(&[4, 4, 2, 2, 2]),
        vec![gtriv(4)],
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[2])],
            vec![meet(l(2), 3, 2), gl(3, &[2, 2])],
            vec![pin(l(2), 3), gl(3, &[2, 2, 2])],
        ],
    ));
    push(cond(
        ab(&with(vec![4], &rep(2, 5))),
        vec![],
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[2, 2])],
            vec![pin(l(2), 3), gl(3, &[2, 2, 2])],
        ],
    ));
    push(cond(
        ab(&rep(2, 7)),
        vec![meet(l(2), 3, 1), gl(3, &[2, 2, 2]), gtriv(4)],
        vec![],
    ));
    push(at_least(
        3,
        cond(abp(el(6)), vec![meet(P, 3, 1), giso(3, el(4))], vec![]),
    ));
    push(cond(ab(&[4, 4, 4]), vec![gin(3, l(2)), gtriv(4)], vec![]));
    push(cond(
        ab(&[4, 4, 2, 2]),
        vec![gtriv(4)],
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[2, 2])],
            vec![meet(l(2), 3, 2), gl(3, &[2, 2, 2])],
            vec![pin(l(2), 3), gl(3, &rep(2, 4))],
        ],
    ));
    push(cond(
        ab(&[4, 2, 2, 2, 2]),
        vec![gtriv(4)],
        vec![
            vec![meet(l(2), 3, 1), gl(3, &[2, 2, 2])],
            vec![pin(l(2), 3), gl(3, &rep(2, 4))],
        ],
    ));
    push(cond(
        ab(&rep(2, 6)),
        vec![meet(l(2), 3, 1), gl(3, &rep(2, 4)), gtriv(4)],
        vec![],
    ));

    let texts: Vec<&'static str> = ITEM_TEXT.lines().collect();
    assert_eq!(t.len(), ITEM_COUNT as usize);
    assert_eq!(texts.len(), ITEM_COUNT as usize);
    t.into_iter()
        .zip(texts)
        .enumerate()
        .map(
            |(k, ((literal, corrected, note), citation))| ConditionRecord {
                item: k as u32 + 1,
                citation,
                literal,
                corrected,
                note,
            },
        )
        .collect()
}

/// All 108 records, item `k` at index `k - 1`.
pub fn condition_records() -> &'static [ConditionRecord] {
    static RECORDS: OnceLock<Vec<ConditionRecord>> = OnceLock::new();
    RECORDS.get_or_init(records)
}

pub fn condition_record(item: u32) -> Result<&'static ConditionRecord> {
    condition_records()
        .get((item as usize).wrapping_sub(1))
        .ok_or(Error::UnsupportedItem(item))
}

// ---------------------------------------------------------------------------
// Static analysis of the table

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DefectKind {
    /// No group satisfies the branch.
    Unsatisfiable { reason: String },
    /// `G′` has exponent `p`, so `D_(m) = γ_m` for every `m` and the branch
    /// pins the weight `Σ log_p |γ_i|` to a value other than 10.
    ForcedWeight { weight: u64, t_upper: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Defect {
    pub item: u32,
    /// Index into [`Condition::branches`].
    pub branch: usize,
    pub prime: u32,
    pub kind: DefectKind,
}

/// `sub` is the type of a subgroup of `sup` (both largest first) iff it
/// fits inside factor by factor.
fn abelian_embeds(sub: &[u64], sup: &[u64]) -> bool {
    sub.len() <= sup.len() && sub.iter().zip(sup).all(|(a, b)| a <= b)
}

fn log_p(n: u128, p: u32) -> u64 {
    let mut n = n;
    let mut k = 0;
    while n > 1 {
        n /= p as u128;
        k += 1;
    }
    k
}

fn derived_facts(c: &Condition, p: u32) -> (u128, Option<Vec<u64>>, bool) {
    match &c.derived {
        DerivedShape::Abelian { shape } => {
            let v = shape.at(p);
            let exp_p = v.iter().all(|&x| x == p as u64);
            (shape.order(p), Some(v), exp_p)
        }
        DerivedShape::SmallGroups { order, .. } => (*order as u128, None, false),
        // Heisenberg-type groups have exponent p for odd p.
        DerivedShape::Named { group } => ((p as u128).pow(group.log_order()), None, p > 2),
    }
}

fn branch_defects(c: &Condition, branch: &[Atom], p: u32) -> Vec<DefectKind> {
    let unsat = |reason: String| DefectKind::Unsatisfiable { reason };
    let mut out = Vec::new();
    if !c.rule.admits(p) {
        out.push(unsat(format!(
            "the condition names {p}-groups but requires {}",
            {
                let PrimeRule::AtLeast(m) = c.rule else {
                    unreachable!()
                };
                format!("p ≥ {m}")
            }
        )));
    }
    let (order, derived_ab, exp_p) = derived_facts(c, p);
    let mut gammas: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for a in branch {
        if let Atom::GammaIso { i, shape } = a {
            if shape.literal_primes().iter().any(|&q| q != p as u64) {
                out.push(unsat(format!("γ{i} ≅ {shape} is not a {p}-group")));
            }
            gammas.insert(*i, shape.at(p));
        }
    }
    for (&i, v) in &gammas {
        let o: u128 = v.iter().map(|&x| x as u128).product();
        if o > 1 && o >= order {
            out.push(unsat(format!(
                "|γ{i}| = {o} but γ3 is a proper subgroup of G′ of order {order}"
            )));
        } else if let Some(d) = &derived_ab {
            if !abelian_embeds(v, d) {
                out.push(unsat(format!("G′ has no subgroup of type {v:?} for γ{i}")));
            }
        }
    }
    if exp_p && out.is_empty() {
        // weight = Σ_{i≥2} log_p |γ_i| once every γ_i is known
        let mut weight = log_p(order, p);
        let mut complete = false;
        for i in 3.. {
            let Some(v) = gammas.get(&i) else { break };
            let o: u128 = v.iter().map(|&x| x as u128).product();
            weight += log_p(o, p);
            // γ_{i+1} is a proper subgroup of γ_i, so order p forces 1 next.
            if o <= p as u128 {
                complete = true;
                break;
            }
        }
        if complete && weight != 10 {
            out.push(DefectKind::ForcedWeight {
                weight,
                t_upper: 2 + (p as u64 - 1) * weight,
            });
        }
    }
    out
}

/// Branches that no group can satisfy, or that force the wrong index.
pub fn table_defects(set: ConditionSet) -> Vec<Defect> {
    let mut out = Vec::new();
    for r in condition_records() {
        let c = r.condition(set);
        let p = c.natural_prime();
        for (b, branch) in c.branches().iter().enumerate() {
            for kind in branch_defects(c, branch, p) {
                out.push(Defect {
                    item: r.item,
                    branch: b,
                    prime: p,
                    kind,
                });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Fingerprints of the shipped small groups

struct Indexed {
    id: (u64, u64),
    presentation: PcPresentation,
    iso: OnceLock<std::result::Result<IsoType, Error>>,
}

/// Shipped groups with a small-group id, fingerprinted on demand.
pub struct FingerprintIndex {
    by_order: BTreeMap<u128, Vec<Indexed>>,
}

impl FingerprintIndex {
    pub fn empty() -> Self {
        FingerprintIndex {
            by_order: BTreeMap::new(),
        }
    }

    pub fn from_entries(entries: &[CatalogEntry]) -> Self {
        let mut by_order: BTreeMap<u128, Vec<Indexed>> = BTreeMap::new();
        for e in entries {
            let Some(id) = e.small_group_id else { continue };
            let slot = by_order.entry(e.order()).or_default();
            if slot.iter().any(|x| x.id == id) {
                continue;
            }
            slot.push(Indexed {
                id,
                presentation: e.presentation.clone(),
                iso: OnceLock::new(),
            });
        }
        for v in by_order.values_mut() {
            v.sort_by_key(|x| x.id);
        }
        FingerprintIndex { by_order }
    }

    pub fn load(data_dir: &Path) -> Result<Self> {
        Ok(Self::from_entries(&crate::catalog::load_data_catalog(
            data_dir,
        )?))
    }

    pub fn ids(&self, order: u128) -> Vec<(u64, u64)> {
        self.by_order
            .get(&order)
            .map(|v| v.iter().map(|x| x.id).collect())
            .unwrap_or_default()
    }

    pub fn fingerprint_of(&self, id: (u64, u64), cap: usize) -> Option<Result<IsoType>> {
        let x = self
            .by_order
            .get(&(id.0 as u128))?
            .iter()
            .find(|x| x.id == id)?;
        Some(
            x.iso
                .get_or_init(|| fingerprint(&Subgroup::whole(&x.presentation), cap))
                .clone(),
        )
    }

    /// Shipped groups whose fingerprint equals `iso`.
    pub fn candidates(&self, iso: &IsoType, cap: usize) -> Result<Vec<(u64, u64)>> {
        let mut out = Vec::new();
        for x in self.by_order.get(&iso.order()).into_iter().flatten() {
            if self.fingerprint_of(x.id, cap).expect("indexed")? == *iso {
                out.push(x.id);
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Profiles

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupFacts {
    pub order: u128,
    pub iso: IsoType,
}

impl SubgroupFacts {
    fn of(h: &Subgroup, cap: usize) -> Result<Self> {
        Ok(SubgroupFacts {
            order: h.order(),
            iso: fingerprint(h, cap)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeetFacts {
    pub i: usize,
    pub meet_order: u128,
    pub gamma_in_power: bool,
    pub power_in_gamma: bool,
}

/// Facts about `G′^{r^level}`, `r` the prime of the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerFacts {
    pub level: usize,
    pub facts: SubgroupFacts,
    pub in_derived_center: bool,
    /// Against `γ_3, …, γ_6`.
    pub gamma: Vec<MeetFacts>,
}

/// `G′^{r^a} γ_3^{r^b}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedFacts {
    pub a: usize,
    pub b: usize,
    pub facts: SubgroupFacts,
    pub contains_gamma4: bool,
}

/// Everything the conditions can ask about one group.
#[derive(Debug, Clone, Serialize)]
pub struct StructureProfile {
    /// Field characteristic.
    pub p: u32,
    pub group_prime: u32,
    pub group_order: u128,
    pub derived: SubgroupFacts,
    /// Set by the caller when the isomorphism type of `G′` is known.
    pub derived_declared_id: Option<(u64, u64)>,
    /// Shipped groups with the fingerprint of `G′`.
    pub derived_candidates: Vec<(u64, u64)>,
    pub named: Vec<NamedGroup>,
    /// `γ_3, …, γ_6`.
    pub gamma: Vec<SubgroupFacts>,
    /// Down to and including the first trivial power.
    pub derived_powers: Vec<PowerFacts>,
    pub derived_derived: SubgroupFacts,
    pub derived_derived_in_center: bool,
    pub mixed: Vec<MixedFacts>,
}

pub const GAMMA_RANGE: std::ops::RangeInclusive<usize> = 3..=6;
const MIXED_LEVELS: usize = 2;

pub fn profile(
    group: &PcPresentation,
    p: u32,
    index: &FingerprintIndex,
    cap: usize,
) -> Result<StructureProfile> {
    let r = group.p();
    let lcs = lower_central_series(group, cap)?;
    let term = |i: usize| {
        lcs.get(i - 1)
            .cloned()
            .unwrap_or_else(|| Subgroup::trivial(group))
    };
    let derived = term(2);
    let gammas: Vec<Subgroup> = GAMMA_RANGE.map(term).collect();
    let z = center(&derived, cap)?;

    let mut powers = vec![derived.clone()];
    while !powers.last().expect("nonempty").is_trivial() {
        let q = (r as u64).pow(powers.len() as u32);
        powers.push(power_subgroup(&derived, q, cap)?);
    }
    let mut derived_powers = Vec::new();
    for (level, h) in powers.iter().enumerate() {
        let mut gamma = Vec::new();
        for (k, g) in gammas.iter().enumerate() {
            gamma.push(MeetFacts {
                i: k + 3,
                meet_order: intersection(h, g, cap)?.order(),
                gamma_in_power: g.is_subgroup_of(h),
                power_in_gamma: h.is_subgroup_of(g),
            });
        }
        derived_powers.push(PowerFacts {
            level,
            facts: SubgroupFacts::of(h, cap)?,
            in_derived_center: h.is_subgroup_of(&z),
            gamma,
        });
    }

    let mut mixed = Vec::new();
    for a in 0..=MIXED_LEVELS {
        let da = powers
            .get(a)
            .cloned()
            .unwrap_or_else(|| Subgroup::trivial(group));
        for b in 0..=MIXED_LEVELS {
            let g3b = power_subgroup(&gammas[0], (r as u64).pow(b as u32), cap)?;
            let m = subgroup_product(&da, &g3b, cap)?;
            mixed.push(MixedFacts {
                a,
                b,
                contains_gamma4: gammas[1].is_subgroup_of(&m),
                facts: SubgroupFacts::of(&m, cap)?,
            });
        }
    }

    let dd = derived_subgroup(&derived, cap)?;
    let derived_facts = SubgroupFacts::of(&derived, cap)?;
    let derived_candidates = if derived.is_trivial() {
        Vec::new()
    } else {
        index.candidates(&derived_facts.iso, cap)?
    };
    let mut named = Vec::new();
    if !derived_facts.iso.is_abelian() {
        for n in NamedGroup::ALL {
            if (r as u128).pow(n.log_order()) != derived.order() {
                continue;
            }
            let h = n.build(r)?;
            if fingerprint(&Subgroup::whole(&h), cap)? == derived_facts.iso {
                named.push(n);
            }
        }
    }

    Ok(StructureProfile {
        p,
        group_prime: r,
        group_order: group.order(),
        derived: derived_facts,
        derived_declared_id: None,
        derived_candidates,
        named,
        gamma: gammas
            .iter()
            .map(|g| SubgroupFacts::of(g, cap))
            .collect::<Result<_>>()?,
        derived_powers,
        derived_derived: SubgroupFacts::of(&dd, cap)?,
        derived_derived_in_center: dd.is_subgroup_of(&z),
        mixed,
    })
}

// ---------------------------------------------------------------------------
// Matching

#[derive(Debug, Clone, PartialEq, Eq)]
enum Truth {
    Yes,
    No,
    Unknown(String),
}

impl StructureProfile {
    fn level(&self, q: Exp) -> usize {
        q.level(self.p, self.group_prime)
    }

    fn power(&self, q: Exp) -> &PowerFacts {
        let j = self.level(q).min(self.derived_powers.len() - 1);
        &self.derived_powers[j]
    }

    fn gamma_facts(&self, i: usize) -> Option<&SubgroupFacts> {
        GAMMA_RANGE
            .contains(&i)
            .then(|| &self.gamma[i - *GAMMA_RANGE.start()])
    }

    fn meet(&self, q: Exp, i: usize) -> Option<&MeetFacts> {
        self.power(q).gamma.iter().find(|m| m.i == i)
    }

    fn mixed(&self, a: Exp, b: Exp) -> Option<&MixedFacts> {
        let top = self.derived_powers.len() - 1;
        let a = self.level(a).min(top);
        let b = self.level(b);
        self.mixed.iter().find(|m| m.a == a && m.b == b)
    }

    fn atom(&self, atom: &Atom) -> Truth {
        let p = self.group_prime;
        let yes = |b: bool| if b { Truth::Yes } else { Truth::No };
        let unknown = || Truth::Unknown(format!("`{atom}` is outside the computed profile"));
        match atom {
            Atom::GammaIso { i, shape } => match self.gamma_facts(*i) {
                Some(f) => yes(shape.matches(&f.iso, p)),
                None => unknown(),
            },
            Atom::GammaInPower { i, q } => self
                .meet(*q, *i)
                .map_or_else(unknown, |m| yes(m.gamma_in_power)),
            Atom::PowerInGamma { q, i } => self
                .meet(*q, *i)
                .map_or_else(unknown, |m| yes(m.power_in_gamma)),
            Atom::PowerEqGamma { q, i } => self
                .meet(*q, *i)
                .map_or_else(unknown, |m| yes(m.power_in_gamma && m.gamma_in_power)),
            Atom::MeetOrder { q, i, n } => self
                .meet(*q, *i)
                .map_or_else(unknown, |m| yes(m.meet_order == *n)),
            Atom::PowerIso { q, shape } => yes(shape.matches(&self.power(*q).facts.iso, p)),
            Atom::GammaIsoPower { i, q } => match self.gamma_facts(*i) {
                Some(f) => yes(f.iso == self.power(*q).facts.iso),
                None => unknown(),
            },
            Atom::Gamma4InMixed { a, b } => self
                .mixed(*a, *b)
                .map_or_else(unknown, |m| yes(m.contains_gamma4)),
            Atom::MixedIso { a, b, shape } => self
                .mixed(*a, *b)
                .map_or_else(unknown, |m| yes(shape.matches(&m.facts.iso, p))),
            Atom::PowerInCenter { q } => yes(self.power(*q).in_derived_center),
            Atom::DerivedDerivedInCenter => yes(self.derived_derived_in_center),
        }
    }

    fn derived_shape(&self, d: &DerivedShape) -> Truth {
        let p = self.group_prime;
        match d {
            DerivedShape::Abelian { shape } => {
                if shape.matches(&self.derived.iso, p) {
                    Truth::Yes
                } else {
                    Truth::No
                }
            }
            DerivedShape::Named { group } => {
                if self.named.contains(group) {
                    Truth::Yes
                } else {
                    Truth::No
                }
            }
            DerivedShape::SmallGroups { order, ids } => {
                if self.derived.order != *order as u128 {
                    return Truth::No;
                }
                let listed = |id: &(u64, u64)| id.0 == *order && ids.contains(&id.1);
                if let Some(id) = self.derived_declared_id {
                    return if listed(&id) { Truth::Yes } else { Truth::No };
                }
                let (inside, outside): (Vec<(u64, u64)>, Vec<(u64, u64)>) =
                    self.derived_candidates.iter().partition(|id| listed(id));
                match (inside.is_empty(), outside.is_empty()) {
                    // Every listed group is shipped, so a listed G′ would
                    // have produced a candidate.
                    (true, _) => Truth::No,
                    (false, true) => Truth::Yes,
                    (false, false) => Truth::Unknown(format!(
                        "indistinguishable candidates for G′: listed {inside:?}, unlisted {outside:?}"
                    )),
                }
            }
        }
    }
}

fn all(ts: impl IntoIterator<Item = Truth>) -> Truth {
    let mut unknown = None;
    for t in ts {
        match t {
            Truth::No => return Truth::No,
            Truth::Unknown(s) => unknown = unknown.or(Some(s)),
            Truth::Yes => {}
        }
    }
    unknown.map_or(Truth::Yes, Truth::Unknown)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemMatch {
    pub item: u32,
    /// Index into [`Condition::branches`] of the first branch that holds.
    pub branch: usize,
    pub condition: String,
    /// How `G′` was identified.
    pub derived_by: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Undetermined {
    pub item: u32,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MatchResult {
    pub matches: Vec<ItemMatch>,
    pub undetermined: Vec<Undetermined>,
}

fn match_condition(profile: &StructureProfile, rec: &ConditionRecord, set: ConditionSet) -> Truth {
    let c = rec.condition(set);
    if !c.rule.admits(profile.p) || profile.p != profile.group_prime {
        return Truth::No;
    }
    let branches = c.branches();
    let per_branch = branches.iter().map(|b| {
        all(std::iter::once(profile.derived_shape(&c.derived))
            .chain(b.iter().map(|a| profile.atom(a))))
    });
    let mut unknown = None;
    for t in per_branch {
        match t {
            Truth::Yes => return Truth::Yes,
            Truth::Unknown(s) => unknown = unknown.or(Some(s)),
            Truth::No => {}
        }
    }
    unknown.map_or(Truth::No, Truth::Unknown)
}

/// Every item the profile satisfies, plus the ones it cannot decide.
pub fn match_conditions(profile: &StructureProfile, set: ConditionSet) -> MatchResult {
    let mut out = MatchResult::default();
    for rec in condition_records() {
        match match_condition(profile, rec, set) {
            Truth::Yes => {
                let c = rec.condition(set);
                let branch = c
                    .branches()
                    .iter()
                    .position(|b| all(b.iter().map(|a| profile.atom(a))) == Truth::Yes)
                    .expect("a branch holds");
                let derived_by = match &c.derived {
                    DerivedShape::Abelian { .. } => "abelian invariants".to_string(),
                    DerivedShape::Named { .. } => "fingerprint of the named group".to_string(),
                    DerivedShape::SmallGroups { .. } => match profile.derived_declared_id {
                        Some(id) => format!("declared id {id:?}"),
                        None => format!("fingerprint, candidates {:?}", profile.derived_candidates),
                    },
                };
                out.matches.push(ItemMatch {
                    item: rec.item,
                    branch,
                    condition: c.to_string(),
                    derived_by,
                });
            }
            Truth::Unknown(reason) => out.undetermined.push(Undetermined {
                item: rec.item,
                reason,
            }),
            Truth::No => {}
        }
    }
    out
}

// ---------------------------------------------------------------------------
// The claim

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Inconsistent => "INCONSISTENT",
            Verdict::Undetermined => "UNDETERMINED",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub p: u32,
    pub group_order: u128,
    pub conditions: ConditionSet,
    pub d_sequence: DVector,
    pub t_upper: u64,
    /// `t^L` from the group algebra itself, when small enough.
    pub oracle_t_upper: Option<u64>,
    pub target: u64,
    pub hits_target: bool,
    pub matches: Vec<ItemMatch>,
    pub undetermined: Vec<Undetermined>,
    pub verdict: Verdict,
    pub explanation: String,
}

/// Options for [`verify_theorem`].
pub struct Classifier<'a> {
    pub index: &'a FingerprintIndex,
    pub set: ConditionSet,
    pub cap: usize,
    /// Groups up to this order are also checked in the group algebra.
    pub oracle_cap: usize,
}

impl<'a> Classifier<'a> {
    pub fn new(index: &'a FingerprintIndex) -> Self {
        Classifier {
            index,
            set: ConditionSet::Literal,
            cap: crate::structure::DEFAULT_CAP,
            oracle_cap: ORACLE_CAP,
        }
    }

    pub fn with_set(mut self, set: ConditionSet) -> Self {
        self.set = set;
        self
    }

    pub fn profile(&self, group: &PcPresentation, p: u32) -> Result<StructureProfile> {
        profile(group, p, self.index, self.cap)
    }

    /// Holds "`t^L = 10p − 8` iff some item matches" against one group.
    pub fn verify_theorem(&self, group: &PcPresentation, p: u32) -> Result<TheoremReport> {
        let d = d_sequence(group, p, self.cap)?;
        let t_upper = jennings_index(&d);
        let oracle_t_upper = if group.order() <= self.oracle_cap as u128 {
            Some(t_upper_direct(group, p, self.oracle_cap)?)
        } else {
            None
        };
        let prof = self.profile(group, p)?;
        let m = match_conditions(&prof, self.set);
        let target = target_index(p);
        let hits_target = t_upper == target;
        let (verdict, explanation) = if oracle_t_upper.is_some_and(|o| o != t_upper) {
            (
                Verdict::Inconsistent,
                format!(
                    "group algebra gives t^L = {}, d-sequence gives {t_upper}",
                    oracle_t_upper.unwrap()
                ),
            )
        } else if !m.matches.is_empty() {
            let items: Vec<u32> = m.matches.iter().map(|x| x.item).collect();
            if hits_target {
                (
                    Verdict::Consistent,
                    format!("t^L = {target} and items {items:?} match"),
                )
            } else {
                (
                    Verdict::Inconsistent,
                    format!("items {items:?} match but t^L = {t_upper} ≠ {target}"),
                )
            }
        } else if !m.undetermined.is_empty() {
            let items: Vec<u32> = m.undetermined.iter().map(|x| x.item).collect();
            (
                Verdict::Undetermined,
                format!("t^L = {t_upper}; no item matches but items {items:?} are undecided"),
            )
        } else if hits_target {
            (
                Verdict::Inconsistent,
                format!("t^L = {target} but no item matches"),
            )
        } else {
            (
                Verdict::Consistent,
                format!("t^L = {t_upper} ≠ {target} and no item matches"),
            )
        };
        Ok(TheoremReport {
            p,
            group_order: group.order(),
            conditions: self.set,
            d_sequence: d,
            t_upper,
            oracle_t_upper,
            target,
            hits_target,
            matches: m.matches,
            undetermined: m.undetermined,
            verdict,
            explanation,
        })
    }
}
